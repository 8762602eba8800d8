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

#include "kreg/oracles.hpp"

#include <cmath>
#include <vector>

#include "kreg/rng.hpp"

namespace kreg {

namespace {

constexpr double row_sum_tol = 1e-12;
constexpr double stationary_tol = 1e-10;
constexpr double balance_tol = 1e-10;

void validate_transition(const Matrix& p) {
    if (p.rows() < 1 || p.rows() != p.cols())
        throw input_error("FiniteMarkovChain: transition matrix must be square");
    for (Index i = 0; i < p.rows(); ++i) {
        if (p.row(i).minCoeff() < 0.0)
            throw input_error("FiniteMarkovChain: negative entry in row " + std::to_string(i));
        if (std::abs(p.row(i).sum() - 1.0) > row_sum_tol)
            throw input_error("FiniteMarkovChain: row " + std::to_string(i) +
                              " does not sum to 1");
    }
}

// Strong connectivity of the support graph: forward and backward
// reachability from state 0.
bool irreducible(const Matrix& p) {
    const Index m = p.rows();
    auto reach = [&](bool forward) {
        std::vector<bool> seen(static_cast<std::size_t>(m), false);
        std::vector<Index> stack{0};
        seen[0] = true;
        while (!stack.empty()) {
            const Index u = stack.back();
            stack.pop_back();
            for (Index v = 0; v < m; ++v) {
                const double w = forward ? p(u, v) : p(v, u);
                if (w > 0.0 && !seen[static_cast<std::size_t>(v)]) {
                    seen[static_cast<std::size_t>(v)] = true;
                    stack.push_back(v);
                }
            }
        }
        for (bool s : seen)
            if (!s) return false;
        return true;
    };
    return reach(true) && reach(false);
}

} // namespace

FiniteMarkovChain FiniteMarkovChain::from_matrix(Matrix transition) {
    const Index m = transition.rows();
    validate_transition(transition);
    FiniteMarkovChain chain;
    chain.num_states = m;
    chain.state_embedding = Matrix::Identity(m, m); // one-hot
    chain.transition = std::move(transition);
    return chain;
}

FiniteMarkovChain FiniteMarkovChain::from_matrix(Matrix transition, Matrix embedding) {
    validate_transition(transition);
    if (embedding.rows() != transition.rows())
        throw input_error("FiniteMarkovChain: embedding needs one row per state");
    FiniteMarkovChain chain;
    chain.num_states = transition.rows();
    chain.transition = std::move(transition);
    chain.state_embedding = std::move(embedding);
    return chain;
}

FiniteMarkovChain random_reversible_chain(Index num_states, std::uint64_t seed) {
    if (num_states < 2)
        throw input_error("random_reversible_chain: need at least two states");
    Matrix w(num_states, num_states);
    for (Index i = 0; i < num_states; ++i) {
        for (Index j = i; j < num_states; ++j) {
            // strictly positive weights keep the chain irreducible
            const double v = 0.1 + 0.9 * rng::uniform(seed, 3,
                                 static_cast<std::uint64_t>(i) * num_states + j);
            w(i, j) = v;
            w(j, i) = v;
        }
    }
    Matrix p = w.array().colwise() / w.rowwise().sum().array();
    return FiniteMarkovChain::from_matrix(std::move(p));
}

Vector stationary_distribution(const FiniteMarkovChain& chain) {
    const Matrix& p = chain.transition;
    const Index m = chain.num_states;
    if (!irreducible(p))
        throw input_error("stationary_distribution: no unique invariant measure "
                          "(chain is reducible)");

    // pi^T P = pi^T with sum(pi) = 1: replace one balance equation by the
    // normalization constraint.
    Matrix a = p.transpose() - Matrix::Identity(m, m);
    a.row(m - 1).setOnes();
    Vector b = Vector::Zero(m);
    b[m - 1] = 1.0;
    Vector pi = a.partialPivLu().solve(b);
    pi = pi.cwiseMax(0.0);
    pi /= pi.sum();

    const double residual = (p.transpose() * pi - pi).norm();
    if (residual > stationary_tol)
        throw numeric_error("stationary_distribution: solve residual " +
                            std::to_string(residual) + " above tolerance");
    return pi;
}

DetailedBalanceReport check_detailed_balance(const FiniteMarkovChain& chain) {
    const Vector pi = stationary_distribution(chain);
    double violation = 0.0;
    for (Index i = 0; i < chain.num_states; ++i)
        for (Index j = i + 1; j < chain.num_states; ++j)
            violation = std::max(violation, std::abs(pi[i] * chain.transition(i, j) -
                                                     pi[j] * chain.transition(j, i)));
    return {violation <= balance_tol, violation};
}

Matrix exact_koopman_matrix(const FiniteMarkovChain& chain) {
    // (P g)_i = sum_j P_ij g_j is exactly the conditional expectation of g
    // one step ahead given the current state.
    return chain.transition;
}

RiskDecomposition risk_brute_force(const FiniteMarkovChain& chain, const KernelSpec& kernel,
                                   const Eigen::Ref<const Matrix>& candidate) {
    const Index m = chain.num_states;
    if (candidate.rows() != m || candidate.cols() != m)
        throw input_error("risk_brute_force: candidate operator must be " +
                          std::to_string(m) + " x " + std::to_string(m));

    const Vector pi = stationary_distribution(chain);
    const Matrix& p = chain.transition;
    const Matrix g = gram(kernel, chain.state_embedding).entries;

    // Risk: expectation over all transition pairs (i -> j) of the squared
    // feature-space distance between the observed next state and the
    // candidate's image of the current one.
    double risk = 0.0;
    for (Index i = 0; i < m; ++i) {
        for (Index j = 0; j < m; ++j) {
            double dist = g(j, j);
            for (Index b = 0; b < m; ++b) {
                dist -= 2.0 * candidate(i, b) * g(b, j);
                for (Index b2 = 0; b2 < m; ++b2)
                    dist += candidate(i, b) * candidate(i, b2) * g(b, b2);
            }
            risk += pi[i] * p(i, j) * dist;
        }
    }

    // Approximation error: the exact conditional-mean operator has state
    // coefficients equal to the transition rows.
    double approx = 0.0;
    for (Index i = 0; i < m; ++i) {
        const Vector diff = (p.row(i) - candidate.row(i)).transpose();
        approx += pi[i] * diff.dot(g * diff);
    }

    // Conditional variance of the embedded next state.
    double sigma2 = 0.0;
    for (Index i = 0; i < m; ++i) {
        double second_moment = 0.0;
        for (Index j = 0; j < m; ++j)
            second_moment += p(i, j) * g(j, j);
        const Vector mean_coeffs = p.row(i).transpose();
        sigma2 += pi[i] * (second_moment - mean_coeffs.dot(g * mean_coeffs));
    }

    return {risk, approx, sigma2};
}

Trajectory simulate_chain(const FiniteMarkovChain& chain, Index num_steps,
                          std::uint64_t seed, Index burn_in,
                          std::optional<Index> initial_state) {
    if (num_steps < 1)
        throw input_error("simulate_chain: need at least one step");
    const Index m = chain.num_states;

    Index state;
    if (initial_state) {
        if (*initial_state < 0 || *initial_state >= m)
            throw input_error("simulate_chain: initial state out of range");
        state = *initial_state;
    } else {
        const Vector pi = stationary_distribution(chain);
        const double u = rng::uniform(seed, 4, 0);
        double acc = 0.0;
        state = m - 1;
        for (Index i = 0; i < m; ++i) {
            acc += pi[i];
            if (u < acc) {
                state = i;
                break;
            }
        }
    }

    Matrix states(num_steps + 1, chain.state_embedding.cols());
    Index row = 0;
    for (Index t = 0; t < burn_in + num_steps + 1; ++t) {
        if (t >= burn_in)
            states.row(row++) = chain.state_embedding.row(state);
        // inverse-CDF step along the current transition row
        const double u = rng::uniform(seed, 5, static_cast<std::uint64_t>(t) + 1);
        double acc = 0.0;
        Index next = m - 1;
        for (Index j = 0; j < m; ++j) {
            acc += chain.transition(state, j);
            if (u < acc) {
                next = j;
                break;
            }
        }
        state = next;
    }
    Trajectory traj;
    traj.states = std::move(states);
    return traj;
}

LinearSystem LinearSystem::make(Matrix dynamics, double noise_std, std::uint64_t seed) {
    if (dynamics.rows() < 1 || dynamics.rows() != dynamics.cols())
        throw input_error("LinearSystem: dynamics matrix must be square");
    if (noise_std < 0.0)
        throw config_error("LinearSystem: noise_std must be nonnegative");
    LinearSystem sys;
    sys.noise_std = noise_std;
    sys.seed = seed;
    Eigen::EigenSolver<Matrix> es(dynamics, false);
    sys.spectral_radius = es.eigenvalues().cwiseAbs().maxCoeff();
    sys.dynamics = std::move(dynamics);
    return sys;
}

Trajectory simulate_linear_system(const LinearSystem& system,
                                  const Eigen::Ref<const Vector>& x0, Index num_steps) {
    if (num_steps < 1)
        throw input_error("simulate_linear_system: need at least one step");
    const Index d = system.dynamics.rows();
    if (x0.size() != d)
        throw input_error("simulate_linear_system: x0 has wrong dimension");

    Matrix states(num_steps + 1, d);
    states.row(0) = x0.transpose();
    Vector x = x0;
    for (Index t = 0; t < num_steps; ++t) {
        x = system.dynamics * x;
        if (system.noise_std > 0.0) {
            for (Index j = 0; j < d; ++j)
                x[j] += system.noise_std *
                        rng::normal(system.seed, 6, static_cast<std::uint64_t>(t) * d + j);
        }
        states.row(t + 1) = x.transpose();
    }
    Trajectory traj;
    traj.states = std::move(states);
    return traj;
}

double target_value(const std::string& target, const Eigen::Ref<const Vector>& x) {
    if (target == "zero")
        return 0.0;
    if (target == "linear")
        return x.sum();
    if (target == "sin2pi")
        return std::sin(2.0 * 3.14159265358979323846 * x[0]);
    throw config_error("target_value: unknown target '" + target + "'");
}

RegressionData generate_regression(const RegressionTask& task, Index n) {
    if (n < 1)
        throw input_error("generate_regression: n must be >= 1");
    if (task.dim < 1)
        throw config_error("generate_regression: dim must be >= 1");
    if (task.noise_std < 0.0)
        throw config_error("generate_regression: noise_std must be nonnegative");
    target_value(task.target, Vector::Zero(task.dim)); // reject unknown ids early

    RegressionData data;
    data.inputs.resize(n, task.dim);
    data.targets.resize(n);
    data.truth.resize(n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < task.dim; ++j) {
            const std::uint64_t idx = static_cast<std::uint64_t>(i) * task.dim + j;
            data.inputs(i, j) = task.sampler == InputSampler::UniformBox
                                    ? rng::uniform(task.seed, 8, idx)
                                    : rng::normal(task.seed, 8, idx);
        }
        data.truth[i] = target_value(task.target, data.inputs.row(i).transpose());
        data.targets[i] =
            data.truth[i] + task.noise_std * rng::normal(task.seed, 9, static_cast<std::uint64_t>(i));
    }
    return data;
}

} // namespace kreg
