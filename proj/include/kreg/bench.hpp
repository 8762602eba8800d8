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

#ifndef KREG_BENCH_HPP
#define KREG_BENCH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "kreg/common.hpp"

namespace kreg {

/// One timed fit/predict cycle. Exact rows have centers == 0; timings are
/// medians over `repetitions` runs of the monotonic wall clock.
struct BenchRow {
    std::string method;  // "krr" or "nystrom"
    Index n = 0;
    Index centers = 0;
    double fit_time_ms = 0.0;
    double predict_time_ms = 0.0;
    std::size_t peak_alloc_estimate = 0; // bytes of the dominant matrices
    double test_rmse = 0.0;
};

struct BenchConfig {
    std::vector<Index> n_grid;
    std::vector<Index> m_grid;        // Nystrom center counts
    std::uint64_t seed = 0;
    double gamma = 10.0;              // Gaussian kernel width
    double lambda = 1e-3;
    Index num_test = 512;
    int repetitions = 3;
    Index exact_cap = 20000;          // refuse exact fits beyond this n
};

struct BenchReport {
    std::vector<BenchRow> rows;
};

/// Synthetic-regression sweep over the grids: exact ridge at every n, the
/// low-rank variant at every (n, M) with M <= n. Records timings and held-out
/// error; asserts nothing.
BenchReport run_bench(const BenchConfig& config);

std::string bench_table(const BenchReport& report);
std::string bench_to_json_string(const BenchReport& report);

} // namespace kreg

#endif
