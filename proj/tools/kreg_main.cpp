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

// Command-line front end: data generation, model fitting and persistence,
// prediction, state forecasting, spectral reports and the timing harness.
// Exit codes: 0 success, 2 input or configuration error, 3 numerical error.

#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"

#include "kreg/bench.hpp"
#include "kreg/io.hpp"
#include "kreg/koopman.hpp"
#include "kreg/oracles.hpp"
#include "kreg/ridge.hpp"
#include "kreg/vvridge.hpp"

namespace {

using namespace kreg;

Vector parse_vector(const std::string& text) {
    std::vector<double> vals;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto pos = text.find(',', start);
        const std::string tok = text.substr(start, pos == std::string::npos
                                                       ? std::string::npos
                                                       : pos - start);
        try {
            vals.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw input_error("cannot parse '" + tok + "' as a number in '" + text + "'");
        }
        if (pos == std::string::npos)
            break;
        start = pos + 1;
    }
    Vector v(static_cast<Index>(vals.size()));
    for (std::size_t i = 0; i < vals.size(); ++i)
        v[static_cast<Index>(i)] = vals[i];
    return v;
}

Matrix parse_matrix(const std::string& text) {
    std::vector<Vector> rows;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto pos = text.find(';', start);
        rows.push_back(parse_vector(text.substr(
            start, pos == std::string::npos ? std::string::npos : pos - start)));
        if (pos == std::string::npos)
            break;
        start = pos + 1;
    }
    Matrix m(static_cast<Index>(rows.size()), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols())
            throw input_error("matrix rows have unequal lengths in '" + text + "'");
        m.row(static_cast<Index>(i)) = rows[i].transpose();
    }
    return m;
}

std::vector<Index> parse_grid(const std::string& text) {
    const Vector v = parse_vector(text);
    std::vector<Index> out;
    for (Index i = 0; i < v.size(); ++i)
        out.push_back(static_cast<Index>(v[i]));
    return out;
}

// "linear", "gaussian:1.0", "random_features:GAMMA,M" (seed taken from
// --seed), or a full JSON object.
KernelSpec parse_kernel(const std::string& text, std::uint64_t seed) {
    if (!text.empty() && text.front() == '{') {
        nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
        if (j.is_discarded())
            throw config_error("--kernel: invalid JSON '" + text + "'");
        return kernel_from_json(j);
    }
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (kind == "linear") {
        if (!args.empty())
            throw config_error("--kernel: linear takes no parameters");
        return KernelSpec::linear();
    }
    if (kind == "gaussian") {
        if (args.empty())
            throw config_error("--kernel: gaussian needs a width, e.g. gaussian:1.0");
        return KernelSpec::gaussian(parse_vector(args)[0]);
    }
    if (kind == "random_features" || kind == "rf") {
        const Vector v = parse_vector(args);
        if (v.size() != 2)
            throw config_error("--kernel: random_features needs GAMMA,M");
        return KernelSpec::random_features("trig_gaussian", v[0], static_cast<int>(v[1]),
                                           seed);
    }
    throw config_error("--kernel: unknown kernel '" + text + "'");
}

std::string kernel_summary(const KernelSpec& spec) {
    return kernel_to_json(spec).dump();
}

// Splits a data table into inputs and the trailing target columns.
std::pair<Matrix, Matrix> split_targets(const Matrix& table, Index num_targets,
                                        const std::string& path) {
    if (table.rows() == 0)
        throw input_error(path + ": no data rows");
    if (num_targets < 1)
        throw config_error("--targets must be >= 1");
    if (table.cols() <= num_targets)
        throw input_error(path + ": " + std::to_string(table.cols()) +
                          " columns cannot hold " + std::to_string(num_targets) +
                          " target column(s) plus inputs");
    return {table.leftCols(table.cols() - num_targets), table.rightCols(num_targets)};
}

struct GenerateOptions {
    std::string generator;
    std::string out;
    Index n = 100;
    Index dim = 1;
    double noise = 0.1;
    Index steps = 100;
    std::uint64_t seed = 0;
    Index burn_in = 0;
    std::string dynamics = "0.9,0;0,0.5";
    std::string x0;
    std::string chain_path;
    std::string target = "sin2pi";
};

void run_generate(const GenerateOptions& opt) {
    nlohmann::json meta;
    meta["generator"] = opt.generator;
    meta["seed"] = opt.seed;

    if (opt.generator == "sin-regression") {
        RegressionTask task;
        task.target = opt.target;
        task.noise_std = opt.noise;
        task.dim = opt.dim;
        task.seed = opt.seed;
        const RegressionData data = generate_regression(task, opt.n);
        Matrix table(opt.n, opt.dim + 1);
        table.leftCols(opt.dim) = data.inputs;
        table.col(opt.dim) = data.targets;
        std::vector<std::string> header;
        for (Index j = 0; j < opt.dim; ++j)
            header.push_back("x" + std::to_string(j + 1));
        header.push_back("y");
        write_csv(opt.out, table, header);
        meta["n"] = opt.n;
        meta["d"] = opt.dim;
        meta["noise_std"] = opt.noise;
        meta["target"] = task.target;
    } else if (opt.generator == "linear-system") {
        const Matrix a = parse_matrix(opt.dynamics);
        const LinearSystem sys = LinearSystem::make(a, opt.noise, opt.seed);
        Vector x0 = opt.x0.empty() ? Vector::Ones(a.rows()).eval() : parse_vector(opt.x0);
        const Trajectory traj = simulate_linear_system(sys, x0, opt.steps);
        write_csv(opt.out, traj.states);
        meta["dynamics"] = opt.dynamics;
        meta["x0"] = std::vector<double>(x0.data(), x0.data() + x0.size());
        meta["noise_std"] = opt.noise;
        meta["steps"] = opt.steps;
        meta["spectral_radius"] = sys.spectral_radius;
    } else if (opt.generator == "markov-chain") {
        if (opt.chain_path.empty())
            throw config_error("generate markov-chain: --chain FILE is required");
        nlohmann::json spec = nlohmann::json::parse(read_text_file(opt.chain_path),
                                                    nullptr, false);
        if (spec.is_discarded())
            throw input_error("'" + opt.chain_path + "' is not valid JSON");
        const FiniteMarkovChain chain = chain_from_json(spec);
        const Trajectory traj = simulate_chain(chain, opt.steps, opt.seed, opt.burn_in);
        write_csv(opt.out, traj.states);
        meta["chain"] = spec;
        meta["steps"] = opt.steps;
        meta["burn_in"] = opt.burn_in;
    } else {
        throw config_error("generate: unknown generator '" + opt.generator + "'");
    }
    write_text_file(opt.out + ".meta.json", meta.dump(2) + "\n");
    std::printf("generate: %s -> %s\n", opt.generator.c_str(), opt.out.c_str());
}

void print_fit_summary(const char* cmd, Index n, const KernelSpec& kernel, double lambda,
                       double residual) {
    std::printf("%s: n=%ld kernel=%s lambda=%g fit_residual=%.3e\n", cmd,
                static_cast<long>(n), kernel_summary(kernel).c_str(), lambda, residual);
}

Matrix predict_any(const AnyModel& model, const Matrix& queries) {
    if (std::holds_alternative<KrrModel>(model))
        return predict_krr(std::get<KrrModel>(model), queries);
    if (std::holds_alternative<NystromModel>(model))
        return predict_nystrom(std::get<NystromModel>(model), queries);
    if (std::holds_alternative<VvKrrModel>(model))
        return predict_vvkrr(std::get<VvKrrModel>(model), queries);
    const KoopmanModel& koop = std::get<KoopmanModel>(model);
    Matrix out(queries.rows(), koop.dim());
    for (Index i = 0; i < queries.rows(); ++i)
        out.row(i) = forecast_state(koop, queries.row(i).transpose(), 1);
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"kernel regression and dynamical-system forecasting toolkit"};
    app.require_subcommand(1);

    std::function<void()> action;

    // ---- generate ----
    GenerateOptions gen;
    auto* cmd_generate = app.add_subcommand("generate", "write a synthetic dataset CSV");
    cmd_generate->add_option("--generator", gen.generator,
                             "sin-regression | linear-system | markov-chain")
        ->required();
    cmd_generate->add_option("--out", gen.out, "output CSV path")->required();
    cmd_generate->add_option("--n", gen.n, "sample count (sin-regression)");
    cmd_generate->add_option("--d", gen.dim, "input dimension (sin-regression)");
    cmd_generate->add_option("--noise", gen.noise, "noise standard deviation");
    cmd_generate->add_option("--steps", gen.steps, "trajectory steps");
    cmd_generate->add_option("--seed", gen.seed, "random seed");
    cmd_generate->add_option("--burn-in", gen.burn_in, "discarded leading steps");
    cmd_generate->add_option("--dynamics", gen.dynamics, "system matrix, rows ';' separated");
    cmd_generate->add_option("--x0", gen.x0, "initial state, comma separated");
    cmd_generate->add_option("--chain", gen.chain_path, "chain spec JSON file");
    cmd_generate->add_option("--target", gen.target, "target function id");
    cmd_generate->callback([&] { action = [&] { run_generate(gen); }; });

    // ---- shared fit options ----
    struct FitOptions {
        std::string input, out, kernel = "gaussian:1.0";
        double lambda = 0.1;
        std::uint64_t seed = 0;
        Index targets = 1;
        Index centers = 0;
        std::string output_operator;
    } fit;

    auto add_fit_options = [&](CLI::App* cmd, bool with_targets) {
        cmd->add_option("--input", fit.input, "training data CSV")->required();
        cmd->add_option("--out", fit.out, "model JSON path")->required();
        cmd->add_option("--kernel", fit.kernel, "kernel spec (JSON or shorthand)");
        cmd->add_option("--lambda", fit.lambda, "ridge parameter");
        cmd->add_option("--seed", fit.seed, "random seed");
        if (with_targets)
            cmd->add_option("--targets", fit.targets, "number of trailing target columns");
    };

    auto* cmd_fit_krr = app.add_subcommand("fit-krr", "fit an exact kernel ridge model");
    add_fit_options(cmd_fit_krr, true);
    cmd_fit_krr->callback([&] {
        action = [&] {
            if (fit.targets != 1)
                throw config_error("fit-krr: exactly one target column is supported");
            const auto table = read_csv(fit.input);
            const auto [x, y] = split_targets(table.values, 1, fit.input);
            const KernelSpec kernel = parse_kernel(fit.kernel, fit.seed);
            const KrrModel model = fit_krr(x, y.col(0), kernel, fit.lambda);
            save_model(model, fit.out);
            print_fit_summary("fit-krr", x.rows(), kernel, fit.lambda,
                              model.fit_report.residual);
        };
    });

    auto* cmd_fit_nystrom =
        app.add_subcommand("fit-nystrom", "fit a low-rank (center subsampled) ridge model");
    add_fit_options(cmd_fit_nystrom, true);
    cmd_fit_nystrom->add_option("--centers", fit.centers, "number of centers M")->required();
    cmd_fit_nystrom->callback([&] {
        action = [&] {
            if (fit.targets != 1)
                throw config_error("fit-nystrom: exactly one target column is supported");
            const auto table = read_csv(fit.input);
            const auto [x, y] = split_targets(table.values, 1, fit.input);
            const KernelSpec kernel = parse_kernel(fit.kernel, fit.seed);
            const NystromModel model =
                fit_nystrom(x, y.col(0), kernel, fit.lambda, fit.centers, fit.seed);
            save_model(model, fit.out);
            print_fit_summary("fit-nystrom", x.rows(), kernel, fit.lambda,
                              model.fit_report.residual);
        };
    });

    auto* cmd_fit_vvkrr =
        app.add_subcommand("fit-vvkrr", "fit a multi-output kernel ridge model");
    add_fit_options(cmd_fit_vvkrr, true);
    cmd_fit_vvkrr->add_option("--output-operator", fit.output_operator,
                              "CSV with the T x T output coupling matrix (default identity)");
    cmd_fit_vvkrr->callback([&] {
        action = [&] {
            const auto table = read_csv(fit.input);
            const auto [x, y] = split_targets(table.values, fit.targets, fit.input);
            const KernelSpec kernel = parse_kernel(fit.kernel, fit.seed);
            Matrix a = Matrix::Identity(fit.targets, fit.targets);
            if (!fit.output_operator.empty())
                a = read_csv(fit.output_operator).values;
            const VvKrrModel model = fit_vvkrr(x, y, kernel, a, fit.lambda);
            save_model(model, fit.out);
            // residual of the coupled system K C A + n*lambda*C = Y
            const Matrix k = gram(kernel, x).entries;
            const double residual =
                (k * model.coefficients * a +
                 fit.lambda * static_cast<double>(x.rows()) * model.coefficients - y)
                    .norm() /
                std::max(y.norm(), 1e-300);
            std::printf("fit-vvkrr: n=%ld outputs=%ld kernel=%s lambda=%g fit_residual=%.3e\n",
                        static_cast<long>(x.rows()), static_cast<long>(y.cols()),
                        kernel_summary(kernel).c_str(), fit.lambda, residual);
        };
    });

    auto* cmd_fit_koopman =
        app.add_subcommand("fit-koopman", "fit an evolution-operator model from a trajectory");
    add_fit_options(cmd_fit_koopman, false);
    cmd_fit_koopman->callback([&] {
        action = [&] {
            Trajectory traj;
            traj.states = read_csv(fit.input).values;
            const KernelSpec kernel = parse_kernel(fit.kernel, fit.seed);
            const KoopmanModel model = fit_koopman(traj, kernel, fit.lambda);
            if (model.conditioning_warning)
                std::fprintf(stderr, "fit-koopman: warning: ill-conditioned snapshot set\n");
            save_model(model, fit.out);
            print_fit_summary("fit-koopman", model.num_pairs(), kernel, fit.lambda,
                              model.gram_factor.jitter());
        };
    });

    // ---- predict ----
    struct {
        std::string model, input, out;
    } pred;
    auto* cmd_predict = app.add_subcommand("predict", "predict at query points");
    cmd_predict->add_option("--model", pred.model, "model JSON path")->required();
    cmd_predict->add_option("--input", pred.input, "query CSV")->required();
    cmd_predict->add_option("--out", pred.out, "predictions CSV")->required();
    cmd_predict->callback([&] {
        action = [&] {
            const auto queries = read_csv(pred.input);
            if (queries.values.rows() == 0) {
                write_csv(pred.out, Matrix(0, 0));
                return;
            }
            const AnyModel model = load_model(pred.model);
            write_csv(pred.out, predict_any(model, queries.values));
        };
    });

    // ---- koopman-forecast ----
    struct {
        std::string model, x0, out;
        Index steps = 1;
    } fc;
    auto* cmd_forecast =
        app.add_subcommand("koopman-forecast", "roll the fitted evolution operator forward");
    cmd_forecast->add_option("--model", fc.model, "model JSON path")->required();
    cmd_forecast->add_option("--x0", fc.x0, "initial state, comma separated")->required();
    cmd_forecast->add_option("--steps", fc.steps, "forecast horizon")->required();
    cmd_forecast->callback([&] {
        action = [&] {
            const AnyModel any = load_model(fc.model);
            if (!std::holds_alternative<KoopmanModel>(any))
                throw input_error("koopman-forecast: '" + fc.model +
                                  "' is not a koopman model");
            const auto& model = std::get<KoopmanModel>(any);
            const Matrix states = forecast_state(model, parse_vector(fc.x0), fc.steps);
            write_csv(fc.out.empty() ? fc.model + ".forecast.csv" : fc.out, states);
        };
    });
    cmd_forecast->add_option("--out", fc.out, "forecast CSV");

    // ---- modes ----
    struct {
        std::string model, out;
        Index r = 1;
    } md;
    auto* cmd_modes = app.add_subcommand("modes", "spectral report of a fitted model");
    cmd_modes->add_option("--model", md.model, "model JSON path")->required();
    cmd_modes->add_option("--r", md.r, "number of modes")->required();
    cmd_modes->add_option("--out", md.out, "modes JSON path")->required();
    cmd_modes->callback([&] {
        action = [&] {
            const AnyModel any = load_model(md.model);
            if (!std::holds_alternative<KoopmanModel>(any))
                throw input_error("modes: '" + md.model + "' is not a koopman model");
            const auto& model = std::get<KoopmanModel>(any);
            const KoopmanModes modes = koopman_modes(model, md.r);
            nlohmann::json j;
            j["requested"] = md.r;
            j["dropped"] = modes.dropped;
            j["eigenvalues"] = nlohmann::json::array();
            for (Index i = 0; i < modes.eigenvalues.size(); ++i) {
                j["eigenvalues"].push_back({{"re", modes.eigenvalues[i].real()},
                                            {"im", modes.eigenvalues[i].imag()},
                                            {"modulus", std::abs(modes.eigenvalues[i])},
                                            {"residual", modes.residuals[i]}});
            }
            j["eigvec_coeffs_re"] = matrix_to_base64(modes.eigvec_coeffs.real());
            j["eigvec_coeffs_im"] = matrix_to_base64(modes.eigvec_coeffs.imag());
            j["t"] = model.num_pairs();
            write_text_file(md.out, j.dump(2) + "\n");
            for (Index i = 0; i < modes.eigenvalues.size(); ++i)
                std::printf("mode %ld: %.6f%+.6fi  |mu|=%.6f\n", static_cast<long>(i),
                            modes.eigenvalues[i].real(), modes.eigenvalues[i].imag(),
                            std::abs(modes.eigenvalues[i]));
        };
    });

    // ---- bench ----
    struct {
        std::string n_grid = "500,1000,2000", m_grid = "50,200", out;
        std::uint64_t seed = 0;
        Index cap = 20000;
    } bn;
    auto* cmd_bench = app.add_subcommand("bench", "timing sweep of exact vs low-rank fits");
    cmd_bench->add_option("--n-grid", bn.n_grid, "sample counts, comma separated");
    cmd_bench->add_option("--m-grid", bn.m_grid, "center counts, comma separated");
    cmd_bench->add_option("--seed", bn.seed, "random seed");
    cmd_bench->add_option("--out", bn.out, "report JSON path");
    cmd_bench->add_option("--cap", bn.cap, "largest n allowed for exact fits");
    cmd_bench->callback([&] {
        action = [&] {
            BenchConfig config;
            config.n_grid = parse_grid(bn.n_grid);
            config.m_grid = parse_grid(bn.m_grid);
            config.seed = bn.seed;
            config.exact_cap = bn.cap;
            const BenchReport report = run_bench(config);
            std::fputs(bench_table(report).c_str(), stdout);
            if (!bn.out.empty())
                write_text_file(bn.out, bench_to_json_string(report));
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (action)
            action();
        return 0;
    } catch (const numeric_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
