/*
 * Copyright 2026 The kreg authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef KREG_KOOPMAN_HPP
#define KREG_KOOPMAN_HPP

#include "kreg/kernels.hpp"
#include "kreg/spd.hpp"
#include "kreg/trajectory.hpp"

namespace kreg {

/// Kernel estimator of the one-step evolution operator of a stochastic
/// dynamical system, fitted from T snapshot pairs (x_t, x_{t+1}). All
/// prediction paths go through the weight vector
///   alpha(x) = (K_X + T*lambda*I)^-1 khat(x),  khat(x)_t = k(x_t, x),
/// where K_X is the kernel matrix of the input snapshots. The factorization
/// is computed once at fit time; no dense inverse is ever formed.
struct KoopmanModel {
    Matrix inputs;  // T x d, snapshots x_0 ... x_{T-1}
    Matrix outputs; // T x d, snapshots x_1 ... x_T
    KernelSpec kernel;
    double lambda = 0.0;
    SpdFactor gram_factor; // factor of (K_X + T*lambda*I)
    bool conditioning_warning = false; // set for degenerate (constant) inputs

    Index num_pairs() const { return inputs.rows(); }
    Index dim() const { return inputs.cols(); }

    /// Reassembles the T x T input kernel matrix (not cached in the model).
    Matrix input_gram() const { return gram(kernel, inputs).entries; }
};

KoopmanModel fit_koopman(const Trajectory& traj, const KernelSpec& kernel, double lambda);

/// Fit from explicit (input, output) snapshot pairs; rows need not chain into
/// a single trajectory, so pooled segments can be concatenated freely.
KoopmanModel fit_koopman_pairs(const Eigen::Ref<const Matrix>& inputs,
                               const Eigen::Ref<const Matrix>& outputs,
                               const KernelSpec& kernel, double lambda);

/// Weight vector alpha(x); forecasts are linear functionals of it.
Vector koopman_weights(const KoopmanModel& model, const Eigen::Ref<const Vector>& x);

/// One-step forecast of an observable f from its values at the output
/// snapshots: sum_t f(x_{t+1}) alpha(x)_t.
double forecast_observable(const KoopmanModel& model,
                           const Eigen::Ref<const Vector>& f_values,
                           const Eigen::Ref<const Vector>& x);

/// Multi-step state forecast. One step applies the observable forecast to
/// each coordinate function; further steps feed the forecast back as the
/// query (plug-in rollout). Row s holds the (s+1)-step-ahead state.
Matrix forecast_state(const KoopmanModel& model, const Eigen::Ref<const Vector>& x,
                      Index steps);

/// Spectrum of the estimated evolution operator. The nonzero eigenvalues
/// coincide with those of the T x T matrix C = K_XY (K_X + T*lambda*I)^-1,
/// (K_XY)_st = k(x_s, x_{t+1}); eigenvector coefficients are expansions over
/// the input-snapshot kernel sections.
struct KoopmanModes {
    Eigen::VectorXcd eigenvalues;    // sorted by modulus, descending
    Eigen::MatrixXcd eigvec_coeffs;  // T x r
    Vector residuals;                // ||C v - mu v|| per retained unit pair
    Index dropped = 0;               // candidates discarded by the residual test
};

/// Top-r eigenpairs by modulus. Small problems use a dense solver; large ones
/// a Krylov (Arnoldi) iteration against the fitted factorization. Pairs whose
/// explicit residual exceeds 1e-6 are dropped and counted. Complex conjugate
/// pairs are never split at the cutoff.
KoopmanModes koopman_modes(const KoopmanModel& model, Index r);

namespace detail {
constexpr Index dense_modes_threshold = 512;
constexpr double mode_residual_tol = 1e-6;
} // namespace detail

} // namespace kreg

#endif
