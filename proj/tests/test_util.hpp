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

#ifndef KREG_TESTS_TEST_UTIL_HPP
#define KREG_TESTS_TEST_UTIL_HPP

#include <Eigen/Dense>

#include "kreg/common.hpp"
#include "kreg/rng.hpp"

// Shared helpers for the test suites. Random data is always drawn from the
// library's counter-based generator so every test is reproducible.

namespace kreg::testutil {

inline Matrix random_matrix(Index rows, Index cols, std::uint64_t seed,
                            double lo = -1.0, double hi = 1.0) {
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j)
            m(i, j) = lo + (hi - lo) * rng::uniform(seed, 100,
                               static_cast<std::uint64_t>(i) * cols + j);
    return m;
}

inline Vector random_vector(Index n, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
    Vector v(n);
    for (Index i = 0; i < n; ++i)
        v[i] = lo + (hi - lo) * rng::uniform(seed, 101, static_cast<std::uint64_t>(i));
    return v;
}

inline double rel_diff(const Vector& a, const Vector& b) {
    const double scale = std::max({a.norm(), b.norm(), 1e-30});
    return (a - b).norm() / scale;
}

inline double rel_diff(const Matrix& a, const Matrix& b) {
    const double scale = std::max({a.norm(), b.norm(), 1e-30});
    return (a - b).norm() / scale;
}

} // namespace kreg::testutil

#endif
