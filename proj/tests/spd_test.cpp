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

#include <cmath>

#include "doctest.h"

#include "kreg/spd.hpp"

#include "test_util.hpp"

using namespace kreg;

TEST_CASE("solving against the identity returns the right-hand side") {
    const Matrix a = Matrix::Identity(4, 4);
    const Vector b = testutil::random_vector(4, 1);
    const auto [x, report] = solve_spd(a, b);
    CHECK((x - b).cwiseAbs().maxCoeff() == 0.0);
    CHECK(report.jitter_used == 0.0);
    CHECK(report.factorization_rank == 4);
    CHECK(report.residual <= 1e-14);
}

TEST_CASE("2x2 solve matches the closed-form inverse") {
    Matrix a(2, 2);
    a << 2.0, 0.3679, 0.3679, 2.0;
    Vector b(2);
    b << 1.0, 2.0;
    // independent route: adjugate over determinant
    const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    const double x0 = (a(1, 1) * b[0] - a(0, 1) * b[1]) / det;
    const double x1 = (a(0, 0) * b[1] - a(1, 0) * b[0]) / det;
    const auto [x, report] = solve_spd(a, b);
    CHECK(x(0, 0) == doctest::Approx(x0).epsilon(1e-12));
    CHECK(x(1, 0) == doctest::Approx(x1).epsilon(1e-12));
    CHECK(x(0, 0) == doctest::Approx(0.3271).epsilon(1e-3));
    CHECK(x(1, 0) == doctest::Approx(0.9398).epsilon(1e-3));
}

TEST_CASE("an effectively singular diagonal succeeds through jitter") {
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 1e-16;
    Vector b(2);
    b << 1.0, 1.0;
    const auto [x, report] = solve_spd(a, b);
    CHECK(report.jitter_used > 0.0);
    // the shift is a power-of-10 multiple of trace/n in [1e-12, 1e-6]
    const double base = a.trace() / 2.0;
    const double ratio = report.jitter_used / base;
    CHECK(ratio >= 1e-12 * 0.999);
    CHECK(ratio <= 1e-6 * 1.001);
    const double log10r = std::log10(ratio);
    CHECK(std::abs(log10r - std::round(log10r)) < 1e-9);
    CHECK(std::isfinite(report.residual));
    CHECK(x.allFinite());
}

TEST_CASE("asymmetric input is rejected") {
    Matrix a(2, 2);
    a << 1.0, 0.5, 0.2, 1.0;
    CHECK_THROWS_AS(SpdFactor{a}, input_error);
}

TEST_CASE("tiny asymmetry within tolerance is accepted") {
    Matrix a = Matrix::Identity(3, 3) * 2.0;
    a(0, 1) = 1e-12;
    CHECK_NOTHROW(SpdFactor{a});
}

TEST_CASE("hopeless matrices exhaust the jitter ladder") {
    CHECK_THROWS_AS(SpdFactor{Matrix::Zero(3, 3)}, numeric_error);
    CHECK_THROWS_AS(SpdFactor{(-Matrix::Identity(3, 3)).eval()}, numeric_error);
}

TEST_CASE("multi-column right-hand sides solve columnwise") {
    const Matrix pts = testutil::random_matrix(6, 6, 3);
    Matrix a = pts * pts.transpose();
    a.diagonal().array() += 6.0;
    const Matrix b = testutil::random_matrix(6, 3, 4);
    const auto [x, report] = solve_spd(a, b);
    CHECK(report.residual <= 1e-12);
    for (Index j = 0; j < 3; ++j) {
        const auto [xj, rj] = solve_spd(a, b.col(j));
        CHECK((x.col(j) - xj.col(0)).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("factor reports full rank on well-conditioned systems") {
    const Matrix pts = testutil::random_matrix(5, 5, 9);
    Matrix a = pts * pts.transpose();
    a.diagonal().array() += 5.0;
    const SpdFactor factor(a);
    CHECK(factor.rank() == 5);
    CHECK(factor.jitter() == 0.0);
}
