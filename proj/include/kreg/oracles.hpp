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

#ifndef KREG_ORACLES_HPP
#define KREG_ORACLES_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "kreg/kernels.hpp"
#include "kreg/trajectory.hpp"

// Exact small-scale references: finite-state Markov chains, linear systems
// and synthetic regression data with known ground truth. Everything here is
// computable in closed form or by exhaustive summation, so it can stand as
// the independent side of statistical checks.

namespace kreg {

struct FiniteMarkovChain {
    Matrix transition;      // m x m row-stochastic
    Index num_states = 0;
    Matrix state_embedding; // m x d, row i embeds state i (default one-hot)

    /// Validates row sums and nonnegativity; embeds states one-hot.
    static FiniteMarkovChain from_matrix(Matrix transition);
    static FiniteMarkovChain from_matrix(Matrix transition, Matrix embedding);
};

/// Random reversible chain: a symmetric positive weight matrix, rows
/// normalized. Deterministic in the seed.
FiniteMarkovChain random_reversible_chain(Index num_states, std::uint64_t seed);

/// Unique stationary distribution of an irreducible chain, solved to
/// residual <= 1e-10. Throws input_error for reducible chains.
Vector stationary_distribution(const FiniteMarkovChain& chain);

struct DetailedBalanceReport {
    bool reversible = false;
    double max_violation = 0.0; // max_ij |pi_i P_ij - pi_j P_ji|
};

DetailedBalanceReport check_detailed_balance(const FiniteMarkovChain& chain);

/// The exact one-step conditional-expectation operator on observables
/// g: states -> R, which for a finite chain is the transition matrix itself.
Matrix exact_koopman_matrix(const FiniteMarkovChain& chain);

/// Exhaustively computed square-loss risk of a candidate operator W given by
/// an m x m coefficient matrix over states: row i of W holds the expansion of
/// the predicted feature-space image of state i over the state kernel
/// sections. Also returns the two pieces risk splits into: the approximation
/// error to the exact conditional-mean operator, and the irreducible noise
/// term. Both pieces are summed independently of the risk itself.
struct RiskDecomposition {
    double risk = 0.0;                // L(W)
    double approximation_error = 0.0; // squared distance to the exact operator
    double sigma2 = 0.0;              // conditional variance term
};

RiskDecomposition risk_brute_force(const FiniteMarkovChain& chain, const KernelSpec& kernel,
                                   const Eigen::Ref<const Matrix>& candidate);

/// Simulates num_steps transitions (num_steps + 1 embedded states). The start
/// state is drawn from the stationary distribution unless given explicitly;
/// burn_in extra leading steps can be discarded.
Trajectory simulate_chain(const FiniteMarkovChain& chain, Index num_steps,
                          std::uint64_t seed, Index burn_in = 0,
                          std::optional<Index> initial_state = std::nullopt);

struct LinearSystem {
    Matrix dynamics;      // d x d
    double noise_std = 0.0;
    std::uint64_t seed = 0;
    double spectral_radius = 0.0;

    static LinearSystem make(Matrix dynamics, double noise_std, std::uint64_t seed);
};

/// x_{t+1} = A x_t + noise_std * g_t with standard normal g_t, deterministic
/// in the system seed. Returns num_steps + 1 states starting at x0.
Trajectory simulate_linear_system(const LinearSystem& system,
                                  const Eigen::Ref<const Vector>& x0, Index num_steps);

enum class InputSampler { UniformBox, StandardNormal };

struct RegressionTask {
    std::string target = "sin2pi"; // "zero" | "linear" | "sin2pi"
    double noise_std = 0.0;
    InputSampler sampler = InputSampler::UniformBox;
    Index dim = 1;
    std::uint64_t seed = 0;
};

struct RegressionData {
    Matrix inputs;  // n x d
    Vector targets; // noisy observations
    Vector truth;   // exact target function at the inputs
};

/// Exact target function value for a task id.
double target_value(const std::string& target, const Eigen::Ref<const Vector>& x);

RegressionData generate_regression(const RegressionTask& task, Index n);

} // namespace kreg

#endif
