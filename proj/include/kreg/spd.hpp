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

#ifndef KREG_SPD_HPP
#define KREG_SPD_HPP

#include "kreg/common.hpp"

namespace kreg {

struct SpdSolveReport {
    double jitter_used = 0.0;     // diagonal shift actually added (absolute)
    Index factorization_rank = 0; // pivots above the rank-detection cutoff
    double residual = 0.0;        // ||A x - b|| / ||b|| against the original A
};

/// Cholesky factorization of a symmetric positive definite matrix with a
/// jitter fallback: if the factorization fails or is numerically rank
/// deficient, a diagonal shift of 1e-12 * trace/n is added and escalated by
/// x10 up to 1e-6 * trace/n.
///
/// Throws input_error when A is asymmetric beyond 1e-10 relative, and
/// numeric_error when the ladder is exhausted.
class SpdFactor {
public:
    SpdFactor() = default; // empty factor; solve() rejects until assigned
    explicit SpdFactor(const Eigen::Ref<const Matrix>& a);

    /// Solves A x = b; b may be a vector or a multi-column matrix.
    Matrix solve(const Eigen::Ref<const Matrix>& b) const;

    double jitter() const { return jitter_; }
    Index rank() const { return rank_; }
    Index size() const { return llt_.rows(); }

private:
    Eigen::LLT<Matrix> llt_;
    double jitter_ = 0.0;
    Index rank_ = 0;
};

/// One-shot solve of A x = b for SPD A. The report carries the jitter that
/// was needed and the relative residual of the returned solution measured
/// against the unshifted A.
std::pair<Matrix, SpdSolveReport> solve_spd(const Eigen::Ref<const Matrix>& a,
                                            const Eigen::Ref<const Matrix>& b);

} // namespace kreg

#endif
