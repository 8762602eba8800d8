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

#include "kreg/koopman.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "kreg/rng.hpp"

namespace kreg {

KoopmanModel fit_koopman_pairs(const Eigen::Ref<const Matrix>& inputs,
                               const Eigen::Ref<const Matrix>& outputs,
                               const KernelSpec& kernel, double lambda) {
    const Index t = inputs.rows();
    if (t < 1)
        throw input_error("fit_koopman: need at least one snapshot pair");
    if (outputs.rows() != t || outputs.cols() != inputs.cols())
        throw input_error("fit_koopman: input and output snapshots must have equal shape");
    if (!(lambda > 0.0))
        throw config_error("fit_koopman: lambda must be positive");

    KoopmanModel model;
    model.inputs = inputs;
    model.outputs = outputs;
    model.kernel = kernel;
    model.lambda = lambda;

    Matrix system = gram(kernel, inputs).entries;
    system.diagonal().array() += static_cast<double>(t) * lambda;
    model.gram_factor = SpdFactor(system);

    bool constant = true;
    for (Index i = 1; i < t && constant; ++i)
        constant = (inputs.row(i).array() == inputs.row(0).array()).all();
    model.conditioning_warning = (t > 1 && constant) || model.gram_factor.jitter() > 0.0;
    return model;
}

KoopmanModel fit_koopman(const Trajectory& traj, const KernelSpec& kernel, double lambda) {
    if (traj.states.rows() < 2)
        throw input_error("fit_koopman: trajectory needs at least two states");
    return fit_koopman_pairs(traj.inputs(), traj.outputs(), kernel, lambda);
}

Vector koopman_weights(const KoopmanModel& model, const Eigen::Ref<const Vector>& x) {
    if (x.size() != model.dim())
        throw input_error("koopman_weights: query dimension " + std::to_string(x.size()) +
                          " does not match model dimension " + std::to_string(model.dim()));
    const Matrix rhs = cross_gram(model.kernel, model.inputs, x.transpose()); // T x 1
    return model.gram_factor.solve(rhs);
}

double forecast_observable(const KoopmanModel& model,
                           const Eigen::Ref<const Vector>& f_values,
                           const Eigen::Ref<const Vector>& x) {
    if (f_values.size() != model.num_pairs())
        throw input_error("forecast_observable: expected " +
                          std::to_string(model.num_pairs()) + " observable values, got " +
                          std::to_string(f_values.size()));
    return f_values.dot(koopman_weights(model, x));
}

Matrix forecast_state(const KoopmanModel& model, const Eigen::Ref<const Vector>& x,
                      Index steps) {
    if (steps < 1)
        throw input_error("forecast_state: steps must be >= 1");
    Matrix out(steps, model.dim());
    Vector current = x;
    for (Index s = 0; s < steps; ++s) {
        const Vector alpha = koopman_weights(model, current);
        current = model.outputs.transpose() * alpha; // coordinate observables at once
        out.row(s) = current.transpose();
    }
    return out;
}

namespace {

struct RitzPair {
    std::complex<double> value;
    Eigen::VectorXcd vector; // unit norm
    double residual = 0.0;
};

// Explicit residual ||C v - mu v|| for unit v, with C applied through its
// factored form: C u = kxy * solve(u).
double ritz_residual(const Matrix& kxy, const SpdFactor& factor, const RitzPair& pair) {
    const Vector re = pair.vector.real();
    const Vector im = pair.vector.imag();
    Eigen::VectorXcd cv(re.size());
    cv.real() = kxy * factor.solve(re);
    cv.imag() = kxy * factor.solve(im);
    return (cv - pair.value * pair.vector).norm();
}

std::vector<RitzPair> dense_eigenpairs(const Matrix& c) {
    Eigen::EigenSolver<Matrix> es(c, true);
    if (es.info() != Eigen::Success)
        throw numeric_error("koopman_modes: dense eigensolver failed");
    std::vector<RitzPair> pairs(static_cast<std::size_t>(c.rows()));
    for (Index i = 0; i < c.rows(); ++i) {
        pairs[static_cast<std::size_t>(i)].value = es.eigenvalues()[i];
        pairs[static_cast<std::size_t>(i)].vector = es.eigenvectors().col(i).normalized();
    }
    return pairs;
}

// Arnoldi iteration on u -> kxy * solve(u) with full reorthogonalization.
// Returns Ritz pairs of the Krylov-projected Hessenberg matrix.
std::vector<RitzPair> arnoldi_eigenpairs(const Matrix& kxy, const SpdFactor& factor,
                                         Index subspace) {
    const Index t = kxy.rows();
    const Index k_max = std::min(subspace, t);

    Matrix v(t, k_max + 1);
    Matrix h = Matrix::Zero(k_max + 1, k_max);
    Vector v0(t);
    for (Index i = 0; i < t; ++i)
        v0[i] = rng::uniform(0x6b72656775ULL, 7, static_cast<std::uint64_t>(i)) - 0.5;
    v.col(0) = v0.normalized();

    Index k = k_max;
    double op_scale = 0.0;
    for (Index j = 0; j < k_max; ++j) {
        Vector w = kxy * factor.solve(v.col(j));
        op_scale = std::max(op_scale, w.norm());
        for (int pass = 0; pass < 2; ++pass) {
            for (Index i = 0; i <= j; ++i) {
                const double proj = v.col(i).dot(w);
                h(i, j) += proj;
                w -= proj * v.col(i);
            }
        }
        h(j + 1, j) = w.norm();
        if (h(j + 1, j) <= 1e-12 * std::max(op_scale, 1.0)) {
            k = j + 1; // invariant subspace reached
            break;
        }
        v.col(j + 1) = w / h(j + 1, j);
    }

    Eigen::EigenSolver<Matrix> es(h.topLeftCorner(k, k), true);
    if (es.info() != Eigen::Success)
        throw numeric_error("koopman_modes: eigensolver failed on the projected matrix");
    std::vector<RitzPair> pairs(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i) {
        pairs[static_cast<std::size_t>(i)].value = es.eigenvalues()[i];
        Eigen::VectorXcd y = es.eigenvectors().col(i);
        Eigen::VectorXcd ritz(t);
        ritz.real() = v.leftCols(k) * y.real();
        ritz.imag() = v.leftCols(k) * y.imag();
        pairs[static_cast<std::size_t>(i)].vector = ritz.normalized();
    }
    return pairs;
}

} // namespace

KoopmanModes koopman_modes(const KoopmanModel& model, Index r) {
    const Index t = model.num_pairs();
    if (r < 1 || r > t)
        throw input_error("koopman_modes: r must satisfy 1 <= r <= T");

    const Matrix kxy = cross_gram(model.kernel, model.inputs, model.outputs);

    std::vector<RitzPair> pairs;
    if (t <= detail::dense_modes_threshold || r >= t / 8) {
        // C = kxy (K_X + T lambda I)^-1, built column-block wise via the factor
        const Matrix c = model.gram_factor.solve(kxy.transpose()).transpose();
        pairs = dense_eigenpairs(c);
    } else {
        const Index subspace = std::min<Index>(t, std::max<Index>(4 * r + 16, 96));
        pairs = arnoldi_eigenpairs(kxy, model.gram_factor, subspace);
    }

    std::stable_sort(pairs.begin(), pairs.end(), [](const RitzPair& a, const RitzPair& b) {
        return std::abs(a.value) > std::abs(b.value);
    });

    KoopmanModes modes;
    std::vector<const RitzPair*> kept;
    Index dropped = 0;
    for (auto& p : pairs) {
        if (static_cast<Index>(kept.size()) >= r) {
            // keep going only to complete a split conjugate pair
            const RitzPair& last = *kept.back();
            const bool completes = last.value.imag() != 0.0 &&
                                   std::abs(p.value - std::conj(last.value)) <=
                                       1e-8 * std::max(std::abs(last.value), 1e-300);
            if (!completes)
                break;
        }
        p.residual = ritz_residual(kxy, model.gram_factor, p);
        if (p.residual <= detail::mode_residual_tol) {
            kept.push_back(&p);
        } else {
            ++dropped;
        }
    }
    modes.dropped = dropped;
    modes.eigenvalues.resize(static_cast<Index>(kept.size()));
    modes.eigvec_coeffs.resize(t, static_cast<Index>(kept.size()));
    modes.residuals.resize(static_cast<Index>(kept.size()));
    for (std::size_t i = 0; i < kept.size(); ++i) {
        modes.eigenvalues[static_cast<Index>(i)] = kept[i]->value;
        modes.eigvec_coeffs.col(static_cast<Index>(i)) = kept[i]->vector;
        modes.residuals[static_cast<Index>(i)] = kept[i]->residual;
    }
    return modes;
}

} // namespace kreg
