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

#include "kreg/ridge.hpp"

#include <numeric>

#include "kreg/rng.hpp"

namespace kreg {

namespace {

void check_fit_args(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Vector>& y,
                    double lambda) {
    if (x.rows() < 1)
        throw input_error("fit: empty training set");
    if (y.size() != x.rows())
        throw input_error("fit: X has " + std::to_string(x.rows()) + " rows but y has " +
                          std::to_string(y.size()) + " entries");
    if (!(lambda > 0.0))
        throw config_error("fit: lambda must be positive");
}

} // namespace

KrrModel fit_krr(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Vector>& y,
                 const KernelSpec& kernel, double lambda) {
    check_fit_args(x, y, lambda);
    const Index n = x.rows();

    Matrix system = gram(kernel, x).entries;
    system.diagonal().array() += static_cast<double>(n) * lambda;

    auto [c, report] = solve_spd(system, y);

    KrrModel model;
    model.support_points = x;
    model.coefficients = std::move(c);
    model.lambda = lambda;
    model.kernel = kernel;
    model.fit_report = report;
    return model;
}

KrrModel fit_krr_dual_form(const Eigen::Ref<const Matrix>& x,
                           const Eigen::Ref<const Vector>& y,
                           const KernelSpec& kernel, double lambda) {
    check_fit_args(x, y, lambda);
    const Index n = x.rows();

    Matrix system = gram(kernel, x).entries / static_cast<double>(n);
    system.diagonal().array() += lambda;

    auto [cprime, report] = solve_spd(system, y);

    KrrModel model;
    model.support_points = x;
    model.coefficients = cprime / static_cast<double>(n);
    model.lambda = lambda;
    model.kernel = kernel;
    model.fit_report = report;
    return model;
}

namespace detail {

Matrix blockwise_kernel_apply(const KernelSpec& kernel, const Eigen::Ref<const Matrix>& xnew,
                              const Eigen::Ref<const Matrix>& points,
                              const Eigen::Ref<const Matrix>& weights, Index block) {
    if (xnew.cols() != points.cols())
        throw input_error("predict: query dimension " + std::to_string(xnew.cols()) +
                          " does not match model dimension " + std::to_string(points.cols()));
    Matrix out(xnew.rows(), weights.cols());
    for (Index start = 0; start < xnew.rows(); start += block) {
        const Index len = std::min(block, xnew.rows() - start);
        out.middleRows(start, len) =
            cross_gram(kernel, xnew.middleRows(start, len), points) * weights;
    }
    return out;
}

} // namespace detail

Vector predict_krr(const KrrModel& model, const Eigen::Ref<const Matrix>& xnew) {
    return detail::blockwise_kernel_apply(model.kernel, xnew, model.support_points,
                                          model.coefficients);
}

std::vector<Index> select_centers(Index n, Index m, std::uint64_t seed) {
    if (n < 1)
        throw input_error("select_centers: n must be >= 1");
    if (m < 1 || m > n)
        throw input_error("select_centers: M must satisfy 1 <= M <= n");

    // partial Fisher-Yates on [0, n)
    std::vector<Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), Index(0));
    for (Index i = 0; i < m; ++i) {
        const double u = rng::uniform(seed, 2, static_cast<std::uint64_t>(i));
        const Index j = i + static_cast<Index>(u * static_cast<double>(n - i));
        std::swap(idx[i], idx[std::min(j, n - 1)]);
    }
    idx.resize(static_cast<std::size_t>(m));
    return idx;
}

NystromModel fit_nystrom(const Eigen::Ref<const Matrix>& x,
                         const Eigen::Ref<const Vector>& y, const KernelSpec& kernel,
                         double lambda, Index m, std::uint64_t seed) {
    check_fit_args(x, y, lambda);
    const Index n = x.rows();
    if (m > n)
        throw input_error("fit_nystrom: M exceeds sample size");

    const std::vector<Index> indices = select_centers(n, m, seed);
    Matrix centers(m, x.cols());
    for (Index i = 0; i < m; ++i)
        centers.row(i) = x.row(indices[static_cast<std::size_t>(i)]);

    const Matrix knm = cross_gram(kernel, x, centers); // n x M
    const Matrix kmm = gram(kernel, centers).entries;  // M x M

    Matrix system = knm.transpose() * knm + (lambda * static_cast<double>(n)) * kmm;
    const Vector rhs = knm.transpose() * y;

    auto [a, report] = solve_spd(system, rhs);

    NystromModel model;
    model.centers = std::move(centers);
    model.coefficients = std::move(a);
    model.lambda = lambda;
    model.kernel = kernel;
    model.center_indices = indices;
    model.fit_report = report;
    return model;
}

Vector predict_nystrom(const NystromModel& model, const Eigen::Ref<const Matrix>& xnew) {
    return detail::blockwise_kernel_apply(model.kernel, xnew, model.centers,
                                          model.coefficients);
}

} // namespace kreg
