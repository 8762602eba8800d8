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

#include "kreg/vvridge.hpp"

#include "kreg/ridge.hpp"
#include "kreg/spd.hpp"

namespace kreg {

namespace {

void check_output_operator(const Eigen::Ref<const Matrix>& a, Index t) {
    if (a.rows() != t || a.cols() != t)
        throw input_error("fit_vvkrr: output operator must be " + std::to_string(t) + " x " +
                          std::to_string(t));
    const double scale = a.cwiseAbs().maxCoeff();
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(scale, 1e-300))
        throw input_error("fit_vvkrr: output operator is not symmetric");
}

} // namespace

VvKrrModel fit_vvkrr(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Matrix>& y,
                     const KernelSpec& scalar_kernel,
                     const Eigen::Ref<const Matrix>& output_operator, double lambda) {
    const Index n = x.rows();
    const Index t = y.cols();
    if (n < 1)
        throw input_error("fit_vvkrr: empty training set");
    if (y.rows() != n)
        throw input_error("fit_vvkrr: X and Y row counts differ");
    if (!(lambda > 0.0))
        throw config_error("fit_vvkrr: lambda must be positive");
    check_output_operator(output_operator, t);

    VvKrrModel model;
    model.support_points = x;
    model.lambda = lambda;
    model.scalar_kernel = scalar_kernel;
    model.output_operator = output_operator;

    const Matrix k = gram(scalar_kernel, x).entries;
    const double ridge = static_cast<double>(n) * lambda;

    if (output_operator.isIdentity(0.0)) {
        // block-diagonal case: T right-hand sides of the same scalar system
        Matrix system = k;
        system.diagonal().array() += ridge;
        model.coefficients = solve_spd(system, y).first;
        return model;
    }

    Eigen::SelfAdjointEigenSolver<Matrix> a_eig(output_operator);
    if (a_eig.info() != Eigen::Success)
        throw numeric_error("fit_vvkrr: eigendecomposition of the output operator failed");
    const Vector a_vals = a_eig.eigenvalues();
    const Matrix a_vecs = a_eig.eigenvectors();
    const double a_tol = 1e-10 * std::max(output_operator.trace() / static_cast<double>(t), 0.0);
    if (a_vals.minCoeff() < -std::max(a_tol, 1e-300))
        throw input_error("fit_vvkrr: output operator is not positive semi-definite");

    Eigen::SelfAdjointEigenSolver<Matrix> k_eig(k);
    if (k_eig.info() != Eigen::Success)
        throw numeric_error("fit_vvkrr: eigendecomposition of the kernel matrix failed");
    // clip spectral noise; the kernel matrix is PSD up to rounding
    const Vector k_vals = k_eig.eigenvalues().cwiseMax(0.0);
    const Matrix k_vecs = k_eig.eigenvectors();

    const Matrix y_rot = y * a_vecs;            // targets in the eigenbasis of A
    const Matrix z = k_vecs.transpose() * y_rot; // and of K
    Matrix c_rot(n, t);
    for (Index j = 0; j < t; ++j) {
        const double d = std::max(a_vals[j], 0.0);
        c_rot.col(j) = z.col(j).array() / (d * k_vals.array() + ridge);
    }
    model.coefficients = (k_vecs * c_rot) * a_vecs.transpose();
    return model;
}

Matrix predict_vvkrr(const VvKrrModel& model, const Eigen::Ref<const Matrix>& xnew) {
    const Matrix weighted = model.coefficients * model.output_operator; // A symmetric
    return detail::blockwise_kernel_apply(model.scalar_kernel, xnew, model.support_points,
                                          weighted);
}

Matrix fit_linear_operator(const Eigen::Ref<const Matrix>& x,
                           const Eigen::Ref<const Matrix>& y, double lambda) {
    const Index n = x.rows();
    if (n < 1)
        throw input_error("fit_linear_operator: empty training set");
    if (y.rows() != n)
        throw input_error("fit_linear_operator: X and Y row counts differ");
    if (!(lambda > 0.0))
        throw config_error("fit_linear_operator: lambda must be positive");

    Matrix system = x.transpose() * x; // d x d
    system.diagonal().array() += lambda * static_cast<double>(n);
    const Matrix rhs = x.transpose() * y; // d x T
    return solve_spd(system, rhs).first.transpose();
}

} // namespace kreg
