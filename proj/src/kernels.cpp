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

#include "kreg/kernels.hpp"

#include <cmath>
#include <cstring>

#include <nlohmann/json.hpp>

#include "kreg/rng.hpp"

namespace kreg {

KernelSpec KernelSpec::linear() {
    KernelSpec s;
    s.kind = KernelKind::Linear;
    return s;
}

KernelSpec KernelSpec::gaussian(double gamma) {
    KernelSpec s;
    s.kind = KernelKind::Gaussian;
    s.gamma = gamma;
    return s;
}

KernelSpec KernelSpec::random_features(const std::string& family, double gamma,
                                       int num_features, std::uint64_t seed) {
    KernelSpec s;
    s.kind = KernelKind::RandomFeatures;
    s.family = family;
    s.gamma = gamma;
    s.num_features = num_features;
    s.seed = seed;
    return s;
}

KernelSpec KernelSpec::sum(KernelSpec a, KernelSpec b) {
    KernelSpec s;
    s.kind = KernelKind::Sum;
    s.left = std::make_shared<const KernelSpec>(std::move(a));
    s.right = std::make_shared<const KernelSpec>(std::move(b));
    return s;
}

KernelSpec KernelSpec::product(KernelSpec a, KernelSpec b) {
    KernelSpec s;
    s.kind = KernelKind::Product;
    s.left = std::make_shared<const KernelSpec>(std::move(a));
    s.right = std::make_shared<const KernelSpec>(std::move(b));
    return s;
}

void KernelSpec::validate() const {
    switch (kind) {
    case KernelKind::Linear:
        return;
    case KernelKind::Gaussian:
        if (!(gamma > 0.0))
            throw config_error("KernelSpec: gaussian gamma must be positive");
        return;
    case KernelKind::RandomFeatures:
        if (family != "trig_gaussian")
            throw config_error("KernelSpec: unknown feature family '" + family + "'");
        if (!(gamma > 0.0))
            throw config_error("KernelSpec: random-features gamma must be positive");
        if (num_features < 1)
            throw config_error("KernelSpec: random-features M must be >= 1");
        return;
    case KernelKind::Sum:
    case KernelKind::Product:
        if (!left || !right)
            throw config_error("KernelSpec: composite kernel missing a child");
        left->validate();
        right->validate();
        return;
    }
    throw config_error("KernelSpec: unknown kernel kind");
}

Vector FeatureMap::features(const Eigen::Ref<const Vector>& x) const {
    return scale * ((weights * x + offsets).array().cos()).matrix();
}

FeatureMap build_feature_map(const std::string& family, Index dim, int num_features,
                             std::uint64_t seed, const std::vector<double>& params) {
    if (dim < 1)
        throw input_error("build_feature_map: dimension must be >= 1");
    if (num_features < 1)
        throw config_error("build_feature_map: M must be >= 1");
    if (family != "trig_gaussian")
        throw config_error("build_feature_map: unknown feature family '" + family + "'");
    if (params.size() != 1 || !(params[0] > 0.0))
        throw config_error("build_feature_map: trig_gaussian needs one positive parameter");

    const double gamma = params[0];
    FeatureMap map;
    map.num_features = num_features;
    map.seed = seed;
    map.scale = std::sqrt(2.0 / static_cast<double>(num_features));
    map.weights.resize(num_features, dim);
    map.offsets.resize(num_features);

    // w ~ N(0, 2*gamma I): E[cos(w.(x - x'))] = exp(-gamma ||x - x'||^2)
    const double w_std = std::sqrt(2.0 * gamma);
    for (int i = 0; i < num_features; ++i) {
        for (Index j = 0; j < dim; ++j)
            map.weights(i, j) =
                w_std * rng::normal(seed, 0, static_cast<std::uint64_t>(i) * dim + j);
        map.offsets(i) = 2.0 * 3.14159265358979323846 * rng::uniform(seed, 1, i);
    }
    return map;
}

struct KernelEvaluator::Node {
    KernelKind kind = KernelKind::Linear;
    double gamma = 0.0;
    FeatureMap map;      // RandomFeatures only
    int left = -1, right = -1;
};

int KernelEvaluator::compile(const KernelSpec& spec) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    nodes_[id].kind = spec.kind;
    nodes_[id].gamma = spec.gamma;
    if (spec.kind == KernelKind::RandomFeatures) {
        nodes_[id].map = build_feature_map(spec.family, dim_, spec.num_features,
                                           spec.seed, {spec.gamma});
    } else if (spec.kind == KernelKind::Sum || spec.kind == KernelKind::Product) {
        const int l = compile(*spec.left);
        const int r = compile(*spec.right);
        nodes_[id].left = l;
        nodes_[id].right = r;
    }
    return id;
}

KernelEvaluator::KernelEvaluator(const KernelSpec& spec, Index dim) : dim_(dim) {
    spec.validate();
    if (dim < 1)
        throw input_error("KernelEvaluator: dimension must be >= 1");
    compile(spec);
}

KernelEvaluator::~KernelEvaluator() = default;
KernelEvaluator::KernelEvaluator(const KernelEvaluator&) = default;
KernelEvaluator::KernelEvaluator(KernelEvaluator&&) noexcept = default;

namespace {

// Lexicographic order on coordinates; canonicalizes argument order so that
// eval(x, y) and eval(y, x) run the identical instruction sequence.
bool lex_less(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b) {
    for (Index i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return false;
}

} // namespace

double KernelEvaluator::eval_node(const Node& node, const Eigen::Ref<const Vector>& x,
                                  const Eigen::Ref<const Vector>& y) const {
    switch (node.kind) {
    case KernelKind::Linear:
        return x.dot(y);
    case KernelKind::Gaussian:
        return std::exp(-node.gamma * (x - y).squaredNorm());
    case KernelKind::RandomFeatures:
        return node.map.features(x).dot(node.map.features(y));
    case KernelKind::Sum:
        return eval_node(nodes_[node.left], x, y) + eval_node(nodes_[node.right], x, y);
    case KernelKind::Product:
        return eval_node(nodes_[node.left], x, y) * eval_node(nodes_[node.right], x, y);
    }
    throw config_error("KernelEvaluator: unknown kernel kind");
}

double KernelEvaluator::operator()(const Eigen::Ref<const Vector>& x,
                                   const Eigen::Ref<const Vector>& y) const {
    if (x.size() != y.size())
        throw input_error("eval_kernel: points have different dimensions (" +
                          std::to_string(x.size()) + " vs " + std::to_string(y.size()) + ")");
    if (x.size() != dim_)
        throw input_error("eval_kernel: expected dimension " + std::to_string(dim_) +
                          ", got " + std::to_string(x.size()));
    if (lex_less(y, x))
        return eval_node(nodes_[0], y, x);
    return eval_node(nodes_[0], x, y);
}

double eval_kernel(const KernelSpec& spec, const Eigen::Ref<const Vector>& x,
                   const Eigen::Ref<const Vector>& y) {
    if (x.size() != y.size())
        throw input_error("eval_kernel: points have different dimensions (" +
                          std::to_string(x.size()) + " vs " + std::to_string(y.size()) + ")");
    KernelEvaluator eval(spec, x.size());
    return eval(x, y);
}

std::uint64_t hash_points(const Eigen::Ref<const Matrix>& points) {
    std::uint64_t h = 0xCBF29CE484222325ULL; // FNV-1a
    for (Index i = 0; i < points.rows(); ++i) {
        for (Index j = 0; j < points.cols(); ++j) {
            std::uint64_t bits;
            const double v = points(i, j);
            std::memcpy(&bits, &v, sizeof(bits));
            for (int b = 0; b < 8; ++b) {
                h ^= (bits >> (8 * b)) & 0xFF;
                h *= 0x100000001B3ULL;
            }
        }
    }
    return h;
}

namespace detail {

Matrix gram_gaussian_expanded(double gamma, const Eigen::Ref<const Matrix>& points) {
    const Index n = points.rows();
    const Vector sq = points.rowwise().squaredNorm();
    Matrix out(n, n);
    for (Index i = 0; i < n; ++i) {
        out(i, i) = 1.0;
        for (Index j = i + 1; j < n; ++j) {
            const double d2 = sq[i] + sq[j] - 2.0 * points.row(i).dot(points.row(j));
            const double v = std::exp(-gamma * std::max(d2, 0.0));
            out(i, j) = v;
            out(j, i) = v;
        }
    }
    return out;
}

} // namespace detail

GramMatrix gram(const KernelSpec& spec, const Eigen::Ref<const Matrix>& points) {
    const Index n = points.rows();
    if (n < 1)
        throw input_error("gram: empty point set");

    GramMatrix g;
    g.kernel = spec;
    g.points_hash = hash_points(points);

    if (spec.kind == KernelKind::Gaussian &&
        n * points.cols() > detail::expanded_form_threshold) {
        spec.validate();
        g.entries = detail::gram_gaussian_expanded(spec.gamma, points);
        return g;
    }

    const KernelEvaluator eval(spec, points.cols());
    const Matrix pts = points.transpose(); // contiguous columns, one per point
    g.entries.resize(n, n);
#pragma omp parallel for schedule(dynamic, 16)
    for (Index i = 0; i < n; ++i) {
        for (Index j = i; j < n; ++j) {
            const double v = eval(pts.col(i), pts.col(j));
            g.entries(i, j) = v;
            g.entries(j, i) = v;
        }
    }
    return g;
}

Matrix cross_gram(const KernelSpec& spec, const Eigen::Ref<const Matrix>& rows,
                  const Eigen::Ref<const Matrix>& cols) {
    if (rows.cols() != cols.cols())
        throw input_error("cross_gram: row and column points have different dimensions (" +
                          std::to_string(rows.cols()) + " vs " +
                          std::to_string(cols.cols()) + ")");
    const KernelEvaluator eval(spec, rows.cols());
    const Matrix a = rows.transpose();
    const Matrix b = cols.transpose();
    Matrix out(rows.rows(), cols.rows());
#pragma omp parallel for schedule(dynamic, 16)
    for (Index i = 0; i < out.rows(); ++i)
        for (Index j = 0; j < out.cols(); ++j)
            out(i, j) = eval(a.col(i), b.col(j));
    return out;
}

nlohmann::json kernel_to_json(const KernelSpec& spec) {
    nlohmann::json j;
    switch (spec.kind) {
    case KernelKind::Linear:
        j["kind"] = "linear";
        break;
    case KernelKind::Gaussian:
        j["kind"] = "gaussian";
        j["gamma"] = spec.gamma;
        break;
    case KernelKind::RandomFeatures:
        j["kind"] = "random_features";
        j["family"] = spec.family;
        j["gamma"] = spec.gamma;
        j["m"] = spec.num_features;
        j["seed"] = spec.seed;
        break;
    case KernelKind::Sum:
        j["kind"] = "sum";
        j["left"] = kernel_to_json(*spec.left);
        j["right"] = kernel_to_json(*spec.right);
        break;
    case KernelKind::Product:
        j["kind"] = "product";
        j["left"] = kernel_to_json(*spec.left);
        j["right"] = kernel_to_json(*spec.right);
        break;
    }
    return j;
}

KernelSpec kernel_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw config_error("kernel_from_json: missing 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    KernelSpec s;
    if (kind == "linear") {
        s = KernelSpec::linear();
    } else if (kind == "gaussian") {
        s = KernelSpec::gaussian(j.at("gamma").get<double>());
    } else if (kind == "random_features") {
        s = KernelSpec::random_features(j.at("family").get<std::string>(),
                                        j.at("gamma").get<double>(),
                                        j.at("m").get<int>(),
                                        j.at("seed").get<std::uint64_t>());
    } else if (kind == "sum") {
        s = KernelSpec::sum(kernel_from_json(j.at("left")),
                            kernel_from_json(j.at("right")));
    } else if (kind == "product") {
        s = KernelSpec::product(kernel_from_json(j.at("left")),
                                kernel_from_json(j.at("right")));
    } else {
        throw config_error("kernel_from_json: unknown kind '" + kind + "'");
    }
    s.validate();
    return s;
}

} // namespace kreg
