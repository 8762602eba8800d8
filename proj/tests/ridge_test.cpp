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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"

#include "kreg/oracles.hpp"
#include "kreg/ridge.hpp"

#include "test_util.hpp"

using namespace kreg;
using testutil::random_matrix;
using testutil::random_vector;
using testutil::rel_diff;

namespace {

Matrix mat1(double a) {
    Matrix m(1, 1);
    m << a;
    return m;
}

} // namespace

TEST_CASE("single-point gaussian fit has the scalar closed form") {
    // (k(x,x) + n*lambda) c = y with n = 1, k(x,x) = 1, lambda = 0.5
    const KrrModel model = fit_krr(mat1(0.3), Vector::Ones(1), KernelSpec::gaussian(1.0), 0.5);
    CHECK(model.coefficients[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    const Vector pred = predict_krr(model, mat1(0.3));
    CHECK(pred[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("zero targets give zero coefficients and zero predictions") {
    const Matrix x = random_matrix(8, 2, 1);
    const KrrModel model = fit_krr(x, Vector::Zero(8), KernelSpec::gaussian(1.0), 0.1);
    CHECK(model.coefficients.cwiseAbs().maxCoeff() == 0.0);
    CHECK(predict_krr(model, random_matrix(5, 2, 2)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("two-point gaussian fit matches the 2x2 closed form") {
    Matrix x(2, 1);
    x << 0.0, 1.0;
    Vector y(2);
    y << 1.0, 2.0;
    const KrrModel model = fit_krr(x, y, KernelSpec::gaussian(1.0), 0.5);

    // independent 2x2 solve of (K + n*lambda I) c = y
    const double e = std::exp(-1.0);
    const double diag = 1.0 + 2.0 * 0.5;
    const double det = diag * diag - e * e;
    const double c0 = (diag * 1.0 - e * 2.0) / det;
    const double c1 = (diag * 2.0 - e * 1.0) / det;
    CHECK(model.coefficients[0] == doctest::Approx(c0).epsilon(1e-12));
    CHECK(model.coefficients[1] == doctest::Approx(c1).epsilon(1e-12));
    CHECK(model.coefficients[0] == doctest::Approx(0.3271).epsilon(1e-3));
    CHECK(model.coefficients[1] == doctest::Approx(0.9398).epsilon(1e-3));

    // prediction at x = 0 is the kernel row against the coefficients
    const Vector pred = predict_krr(model, mat1(0.0));
    CHECK(pred[0] == doctest::Approx(1.0 * c0 + e * c1).epsilon(1e-12));
    CHECK(pred[0] == doctest::Approx(0.6729).epsilon(1e-3));
}

TEST_CASE("fit residual satisfies the stored-system identity") {
    const Matrix x = random_matrix(20, 3, 10);
    const Vector y = random_vector(20, 11);
    const KrrModel model = fit_krr(x, y, KernelSpec::gaussian(2.0), 0.05);
    Matrix system = gram(model.kernel, model.support_points).entries;
    system.diagonal().array() += 20.0 * model.lambda;
    const double res = (system * model.coefficients - y).norm() / y.norm();
    CHECK(res <= 1e-8);
    CHECK(model.fit_report.residual <= 1e-8);
}

TEST_CASE("non-positive lambda is rejected") {
    const Matrix x = mat1(1.0);
    CHECK_THROWS_AS(fit_krr(x, Vector::Ones(1), KernelSpec::linear(), 0.0), config_error);
    CHECK_THROWS_AS(fit_krr(x, Vector::Ones(1), KernelSpec::linear(), -1.0), config_error);
    CHECK_THROWS_AS(fit_krr_dual_form(x, Vector::Ones(1), KernelSpec::linear(), 0.0),
                    config_error);
    CHECK_THROWS_AS(fit_nystrom(x, Vector::Ones(1), KernelSpec::linear(), 0.0, 1, 0),
                    config_error);
}

TEST_CASE("both fit routes agree on the scalar case") {
    const KrrModel dual =
        fit_krr_dual_form(mat1(0.3), Vector::Ones(1), KernelSpec::gaussian(1.0), 0.5);
    CHECK(dual.coefficients[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("both fit routes agree on random instances") {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const Index n = 5 + static_cast<Index>(seed) * 6;
        const Index d = 1 + static_cast<Index>(seed % 4);
        const Matrix x = random_matrix(n, d, 20 + seed);
        const Vector y = random_vector(n, 30 + seed);
        for (const double lambda : {1e-3, 1e-1, 1.0}) {
            for (const auto& kernel :
                 {KernelSpec::gaussian(1.0), KernelSpec::linear()}) {
                const KrrModel a = fit_krr(x, y, kernel, lambda);
                const KrrModel b = fit_krr_dual_form(x, y, kernel, lambda);
                CHECK(rel_diff(a.coefficients, b.coefficients) <= 1e-8);
                const Matrix q = random_matrix(7, d, 40 + seed);
                CHECK(rel_diff(predict_krr(a, q), predict_krr(b, q)) <= 1e-8);
                ++checked;
            }
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("training residual vanishes in the small-lambda limit") {
    // well-separated 1-d points keep the kernel matrix comfortably invertible
    Matrix x(12, 1);
    for (Index i = 0; i < 12; ++i)
        x(i, 0) = static_cast<double>(i) * 0.5;
    Vector y(12);
    for (Index i = 0; i < 12; ++i)
        y[i] = std::sin(x(i, 0));
    const KrrModel model = fit_krr(x, y, KernelSpec::gaussian(1.0), 1e-10);
    const Vector fitted = predict_krr(model, x);
    CHECK((fitted - y).cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("coefficient norm shrinks as lambda grows") {
    const Matrix x = random_matrix(25, 2, 50);
    const Vector y = random_vector(25, 51);
    double previous = 1e300;
    for (const double lambda : {1e-3, 1e-2, 1e-1, 1.0, 10.0}) {
        const KrrModel model = fit_krr(x, y, KernelSpec::gaussian(1.0), lambda);
        const double norm = model.coefficients.norm();
        CHECK(norm <= previous * (1.0 + 1e-12));
        previous = norm;
    }
}

TEST_CASE("selecting all points yields a permutation") {
    auto idx = select_centers(9, 9, 1234);
    std::sort(idx.begin(), idx.end());
    for (Index i = 0; i < 9; ++i)
        CHECK(idx[static_cast<std::size_t>(i)] == i);
}

TEST_CASE("center selection is deterministic in the seed") {
    CHECK(select_centers(100, 10, 7) == select_centers(100, 10, 7));
    CHECK(select_centers(100, 10, 7) != select_centers(100, 10, 8));
}

TEST_CASE("center selection rejects M out of range") {
    CHECK_THROWS_AS(select_centers(5, 6, 0), input_error);
    CHECK_THROWS_AS(select_centers(5, 0, 0), input_error);
}

TEST_CASE("center selection is uniform across the index range") {
    // Marginal frequencies against the uniform-draw expectation. Counts are
    // aggregated over 100 bins of 1000 indices; a 5-sigma binomial band on
    // bins is sound, and the per-index check uses a union bound over the
    // 1e5 indices instead of a plain pointwise band.
    const Index n = 100000, m = 1000;
    const int num_seeds = 100;
    std::vector<int> counts(static_cast<std::size_t>(n), 0);
    for (int seed = 0; seed < num_seeds; ++seed)
        for (const Index i : select_centers(n, m, static_cast<std::uint64_t>(seed)))
            ++counts[static_cast<std::size_t>(i)];

    const double p = static_cast<double>(m) / static_cast<double>(n);
    const Index bin = 1000;
    const double bin_mean = static_cast<double>(num_seeds) * bin * p;
    const double bin_sigma = std::sqrt(static_cast<double>(num_seeds) * bin * p * (1 - p));
    for (Index b = 0; b < n / bin; ++b) {
        long total = 0;
        for (Index i = b * bin; i < (b + 1) * bin; ++i)
            total += counts[static_cast<std::size_t>(i)];
        CHECK(std::abs(static_cast<double>(total) - bin_mean) <= 5.0 * bin_sigma);
    }
    // pointwise: union bound at level 1e-3 over n indices needs ~10 draws
    const int max_count = *std::max_element(counts.begin(), counts.end());
    CHECK(max_count <= 12);
}

TEST_CASE("full-center fits reproduce exact ridge predictions") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const Index n = 8 + static_cast<Index>(seed) * 7;
        const Matrix x = random_matrix(n, 2, 60 + seed);
        const Vector y = random_vector(n, 70 + seed);
        const auto kernel = KernelSpec::gaussian(1.0);
        const KrrModel exact = fit_krr(x, y, kernel, 0.1);
        const NystromModel approx = fit_nystrom(x, y, kernel, 0.1, n, seed);
        const Matrix grid = random_matrix(100, 2, 80 + seed);
        CHECK(rel_diff(predict_krr(exact, grid), predict_nystrom(approx, grid)) <= 1e-6);
    }
}

TEST_CASE("single-center fit has the rank-one closed form") {
    Matrix x(4, 1);
    x << 1.0, 2.0, 3.0, 4.0;
    Vector y(4);
    y << 2.0, 1.0, -1.0, 0.5;
    const double lambda = 0.25;
    const NystromModel model = fit_nystrom(x, y, KernelSpec::linear(), lambda, 1, 3);

    const double center = model.centers(0, 0);
    double quad = 0.0, lin = 0.0;
    for (Index i = 0; i < 4; ++i) {
        quad += (x(i, 0) * center) * (x(i, 0) * center);
        lin += x(i, 0) * center * y[i];
    }
    const double expected = lin / (quad + lambda * 4.0 * center * center);
    CHECK(model.coefficients[0] == doctest::Approx(expected).epsilon(1e-12));
    // prediction at the center is k(c, c) * a
    const Vector pred = predict_nystrom(model, mat1(center));
    CHECK(pred[0] == doctest::Approx(center * center * expected).epsilon(1e-12));
}

TEST_CASE("low-rank models satisfy their normal equations") {
    const Matrix x = random_matrix(40, 2, 85);
    const Vector y = random_vector(40, 86);
    const auto kernel = KernelSpec::gaussian(1.0);
    const NystromModel model = fit_nystrom(x, y, kernel, 0.05, 9, 4);

    CHECK(model.center_indices.size() == 9);
    auto sorted = model.center_indices;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i)
        CHECK((x.row(model.center_indices[i]) - model.centers.row(static_cast<Index>(i)))
                  .cwiseAbs()
                  .maxCoeff() == 0.0);

    const Matrix knm = cross_gram(kernel, x, model.centers);
    const Matrix kmm = gram(kernel, model.centers).entries;
    const Matrix system = knm.transpose() * knm + 0.05 * 40.0 * kmm;
    const Vector rhs = knm.transpose() * y;
    CHECK((system * model.coefficients - rhs).norm() / rhs.norm() <= 1e-6);
}

TEST_CASE("zero targets give a zero low-rank model") {
    const Matrix x = random_matrix(10, 2, 90);
    const NystromModel model =
        fit_nystrom(x, Vector::Zero(10), KernelSpec::gaussian(1.0), 0.1, 4, 0);
    CHECK(model.coefficients.cwiseAbs().maxCoeff() == 0.0);
    CHECK(predict_nystrom(model, x).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("fit_nystrom rejects more centers than samples") {
    const Matrix x = random_matrix(4, 1, 91);
    CHECK_THROWS_AS(fit_nystrom(x, Vector::Ones(4), KernelSpec::linear(), 0.1, 5, 0),
                    input_error);
}

TEST_CASE("center count trades off against test error on average") {
    const Index n = 256;
    const auto kernel = KernelSpec::gaussian(10.0);
    std::vector<double> means, sds;
    for (const Index m : {n / 16, n / 4, n}) {
        std::vector<double> errs;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            RegressionTask task;
            task.target = "sin2pi";
            task.noise_std = 0.1;
            task.seed = 7000 + seed;
            const RegressionData train = generate_regression(task, n);
            RegressionTask test_task = task;
            test_task.seed = 9000 + seed;
            const RegressionData test = generate_regression(test_task, 200);
            const NystromModel model =
                fit_nystrom(train.inputs, train.targets, kernel, 1e-3, m, seed);
            const Vector pred = predict_nystrom(model, test.inputs);
            errs.push_back(std::sqrt((pred - test.truth).squaredNorm() / 200.0));
        }
        const double mean = std::accumulate(errs.begin(), errs.end(), 0.0) / errs.size();
        double var = 0.0;
        for (const double e : errs)
            var += (e - mean) * (e - mean);
        sds.push_back(std::sqrt(var / (errs.size() - 1)));
        means.push_back(mean);
    }
    CHECK(means[1] <= means[0] + sds[0]);
    CHECK(means[2] <= means[1] + sds[1]);
}
