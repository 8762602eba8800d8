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

#ifndef KREG_VVRIDGE_HPP
#define KREG_VVRIDGE_HPP

#include "kreg/kernels.hpp"

namespace kreg {

/// Multi-output ridge regressor with the separable matrix-valued kernel
/// k(x, x') * A: f(x) = sum_i k(x, x_i) A c_i, rows of C being the c_i.
struct VvKrrModel {
    Matrix support_points;  // n x d
    Matrix coefficients;    // n x T
    double lambda = 0.0;
    KernelSpec scalar_kernel;
    Matrix output_operator; // T x T symmetric PSD
};

/// Fits the separable system. A == I decouples into one scalar ridge problem
/// per output column sharing a single factorization; a general symmetric PSD
/// A is handled by rotating the targets into A's eigenbasis, solving
/// (d_j K + n lambda I) per eigenvalue d_j through one eigendecomposition of
/// K, and rotating back.
VvKrrModel fit_vvkrr(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Matrix>& y,
                     const KernelSpec& scalar_kernel,
                     const Eigen::Ref<const Matrix>& output_operator, double lambda);

Matrix predict_vvkrr(const VvKrrModel& model, const Eigen::Ref<const Matrix>& xnew);

/// Ridge estimate of a linear map: W = Y^T X (X^T X + lambda n I)^-1, the
/// closed form of multi-output ridge regression under the plain linear
/// kernel. Returns a T x d matrix acting as x -> W x.
Matrix fit_linear_operator(const Eigen::Ref<const Matrix>& x,
                           const Eigen::Ref<const Matrix>& y, double lambda);

} // namespace kreg

#endif
