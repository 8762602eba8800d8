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

#include "kreg/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "kreg/oracles.hpp"
#include "kreg/ridge.hpp"

namespace kreg {

namespace {

template <typename F>
double median_wall_ms(int repetitions, F&& run) {
    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(repetitions));
    for (int r = 0; r < repetitions; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        run();
        const auto t1 = std::chrono::steady_clock::now();
        times.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
}

double rmse(const Vector& a, const Vector& b) {
    return std::sqrt((a - b).squaredNorm() / static_cast<double>(a.size()));
}

} // namespace

BenchReport run_bench(const BenchConfig& config) {
    BenchReport report;
    const KernelSpec kernel = KernelSpec::gaussian(config.gamma);

    std::vector<Index> n_grid = config.n_grid;
    std::vector<Index> m_grid = config.m_grid;
    std::sort(n_grid.begin(), n_grid.end());
    std::sort(m_grid.begin(), m_grid.end());

    for (const Index n : n_grid) {
        if (n < 1)
            throw config_error("run_bench: n must be >= 1");
        if (n > config.exact_cap)
            throw config_error("run_bench: n = " + std::to_string(n) +
                               " exceeds the exact-fit cap " + std::to_string(config.exact_cap) +
                               "; raise the cap to allow it");

        RegressionTask task;
        task.target = "sin2pi";
        task.noise_std = 0.1;
        task.seed = config.seed + static_cast<std::uint64_t>(n);
        const RegressionData train = generate_regression(task, n);
        RegressionTask test_task = task;
        test_task.seed = task.seed + 0x517CC1B727220A95ULL;
        const RegressionData test = generate_regression(test_task, config.num_test);

        KrrModel exact;
        BenchRow row;
        row.method = "krr";
        row.n = n;
        row.fit_time_ms = median_wall_ms(config.repetitions, [&] {
            exact = fit_krr(train.inputs, train.targets, kernel, config.lambda);
        });
        Vector pred;
        row.predict_time_ms = median_wall_ms(config.repetitions,
                                             [&] { pred = predict_krr(exact, test.inputs); });
        row.test_rmse = rmse(pred, test.truth);
        row.peak_alloc_estimate = static_cast<std::size_t>(n) * n * sizeof(double);
        report.rows.push_back(row);

        for (const Index m : m_grid) {
            if (m > n)
                continue;
            NystromModel approx;
            BenchRow nrow;
            nrow.method = "nystrom";
            nrow.n = n;
            nrow.centers = m;
            nrow.fit_time_ms = median_wall_ms(config.repetitions, [&] {
                approx = fit_nystrom(train.inputs, train.targets, kernel, config.lambda, m,
                                     config.seed);
            });
            Vector npred;
            nrow.predict_time_ms = median_wall_ms(
                config.repetitions, [&] { npred = predict_nystrom(approx, test.inputs); });
            nrow.test_rmse = rmse(npred, test.truth);
            nrow.peak_alloc_estimate = static_cast<std::size_t>(n) * m * sizeof(double);
            report.rows.push_back(nrow);
        }
    }
    return report;
}

std::string bench_table(const BenchReport& report) {
    std::ostringstream out;
    out << "method    n      M      fit_ms      predict_ms  peak_bytes    rmse\n";
    char line[160];
    for (const auto& r : report.rows) {
        std::snprintf(line, sizeof(line), "%-8s  %-6ld %-6ld %-11.2f %-11.2f %-13zu %.6f\n",
                      r.method.c_str(), static_cast<long>(r.n), static_cast<long>(r.centers),
                      r.fit_time_ms, r.predict_time_ms, r.peak_alloc_estimate, r.test_rmse);
        out << line;
    }
    return out.str();
}

std::string bench_to_json_string(const BenchReport& report) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : report.rows) {
        j.push_back({{"method", r.method},
                     {"n", r.n},
                     {"m", r.centers},
                     {"fit_time_ms", r.fit_time_ms},
                     {"predict_time_ms", r.predict_time_ms},
                     {"peak_alloc_estimate", r.peak_alloc_estimate},
                     {"test_rmse", r.test_rmse}});
    }
    return j.dump(2) + "\n";
}

} // namespace kreg
