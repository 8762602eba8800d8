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

#ifndef KREG_RIDGE_HPP
#define KREG_RIDGE_HPP

#include <cstdint>
#include <vector>

#include "kreg/kernels.hpp"
#include "kreg/spd.hpp"

namespace kreg {

/// Kernel ridge regressor: f(x) = sum_i k(x, x_i) c_i with
/// c = (K + n*lambda*I)^-1 y.
struct KrrModel {
    Matrix support_points; // n x d
    Vector coefficients;   // n
    double lambda = 0.0;
    KernelSpec kernel;
    SpdSolveReport fit_report;
};

/// Low-rank regressor on M sampled centers: f(x) = sum_j k(c_j, x) a_j with
/// a = (Knm^T Knm + lambda*n*Kmm)^-1 Knm^T y. Never forms the n x n kernel
/// matrix; peak memory is O(n*M).
struct NystromModel {
    Matrix centers;      // M x d
    Vector coefficients; // M
    double lambda = 0.0;
    KernelSpec kernel;
    std::vector<Index> center_indices; // positions of the centers in the training set
    SpdSolveReport fit_report;
};

KrrModel fit_krr(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Vector>& y,
                 const KernelSpec& kernel, double lambda);

/// Same contract as fit_krr, computed through the n-normalized system
/// (K/n + lambda I) c' = y with c = c'/n. Exists to cross-check the two
/// algebraically equivalent closed forms against each other.
KrrModel fit_krr_dual_form(const Eigen::Ref<const Matrix>& x,
                           const Eigen::Ref<const Vector>& y,
                           const KernelSpec& kernel, double lambda);

Vector predict_krr(const KrrModel& model, const Eigen::Ref<const Matrix>& xnew);

/// M distinct indices in [0, n) drawn uniformly without replacement,
/// deterministic in the seed.
std::vector<Index> select_centers(Index n, Index m, std::uint64_t seed);

NystromModel fit_nystrom(const Eigen::Ref<const Matrix>& x,
                         const Eigen::Ref<const Vector>& y, const KernelSpec& kernel,
                         double lambda, Index m, std::uint64_t seed);

Vector predict_nystrom(const NystromModel& model, const Eigen::Ref<const Matrix>& xnew);

namespace detail {
// Streamed product cross_gram(rows=xnew, cols=points) * weights, evaluated in
// row blocks of `block` queries to bound memory.
constexpr Index predict_block_size = 1024;
Matrix blockwise_kernel_apply(const KernelSpec& kernel, const Eigen::Ref<const Matrix>& xnew,
                              const Eigen::Ref<const Matrix>& points,
                              const Eigen::Ref<const Matrix>& weights,
                              Index block = predict_block_size);
} // namespace detail

} // namespace kreg

#endif
