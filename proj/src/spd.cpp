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

#include "kreg/spd.hpp"

#include <cmath>

namespace kreg {

namespace {

// Squared pivot ratio below which a factorization is treated as rank
// deficient. Matches double precision: kappa beyond ~1e14 is unusable.
constexpr double pivot_ratio_cutoff = 1e-14;

constexpr double asymmetry_tol = 1e-10;

// Returns the numerical rank from the Cholesky pivots and whether the factor
// is acceptable.
std::pair<Index, bool> inspect_pivots(const Eigen::LLT<Matrix>& llt, bool success) {
    const auto d = llt.matrixLLT().diagonal();
    const double dmax = d.maxCoeff();
    if (!success || !(dmax > 0.0) || !std::isfinite(dmax))
        return {0, false};
    Index rank = 0;
    double dmin = dmax;
    for (Index i = 0; i < d.size(); ++i) {
        const double r = d[i] / dmax;
        if (r * r >= pivot_ratio_cutoff)
            ++rank;
        dmin = std::min(dmin, d[i]);
    }
    const bool ok = dmin > 0.0 && (dmin / dmax) * (dmin / dmax) >= pivot_ratio_cutoff;
    return {rank, ok};
}

} // namespace

SpdFactor::SpdFactor(const Eigen::Ref<const Matrix>& a) {
    const Index n = a.rows();
    if (n == 0 || a.cols() != n)
        throw input_error("SpdFactor: matrix must be square and non-empty");

    const double scale = a.cwiseAbs().maxCoeff();
    const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
    if (asym > asymmetry_tol * std::max(scale, 1e-300))
        throw input_error("SpdFactor: matrix is not symmetric");

    const double base = a.trace() / static_cast<double>(n);
    for (int step = -1; step <= 6; ++step) {
        // step -1 is the unshifted attempt; then 1e-12 * trace/n escalating x10
        double shift = 0.0;
        if (step >= 0) {
            if (!(base > 0.0))
                break; // no meaningful jitter scale for a non-positive trace
            shift = base * std::pow(10.0, -12 + step);
        }
        Matrix shifted = a;
        shifted.diagonal().array() += shift;
        llt_.compute(shifted);
        const auto [rank, ok] = inspect_pivots(llt_, llt_.info() == Eigen::Success);
        if (ok) {
            jitter_ = shift;
            rank_ = rank;
            return;
        }
    }
    throw numeric_error("SpdFactor: matrix not positive definite");
}

Matrix SpdFactor::solve(const Eigen::Ref<const Matrix>& b) const {
    if (llt_.rows() == 0)
        throw input_error("SpdFactor: factor is empty");
    if (b.rows() != llt_.rows())
        throw input_error("SpdFactor: right-hand side has wrong size");
    return llt_.solve(b);
}

std::pair<Matrix, SpdSolveReport> solve_spd(const Eigen::Ref<const Matrix>& a,
                                            const Eigen::Ref<const Matrix>& b) {
    if (b.rows() != a.rows())
        throw input_error("solve_spd: dimension mismatch between A and b");
    SpdFactor factor(a);
    Matrix x = factor.solve(b);
    SpdSolveReport report;
    report.jitter_used = factor.jitter();
    report.factorization_rank = factor.rank();
    const double bnorm = b.norm();
    report.residual = bnorm > 0.0 ? (a * x - b).norm() / bnorm : (a * x).norm();
    return {std::move(x), report};
}

} // namespace kreg
