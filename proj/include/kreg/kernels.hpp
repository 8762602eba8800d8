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

#ifndef KREG_KERNELS_HPP
#define KREG_KERNELS_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "kreg/common.hpp"

namespace kreg {

enum class KernelKind { Linear, Gaussian, RandomFeatures, Sum, Product };

/// Declarative description of a positive definite kernel. Immutable once
/// built; composite kernels share their children.
struct KernelSpec {
    KernelKind kind = KernelKind::Linear;
    double gamma = 0.0;                 // Gaussian, and target of trig family
    std::string family;                 // random-features family id
    int num_features = 0;               // random-features M
    std::uint64_t seed = 0;             // random-features draw seed
    std::shared_ptr<const KernelSpec> left, right; // Sum / Product children

    static KernelSpec linear();
    static KernelSpec gaussian(double gamma);
    static KernelSpec random_features(const std::string& family, double gamma,
                                      int num_features, std::uint64_t seed);
    static KernelSpec sum(KernelSpec a, KernelSpec b);
    static KernelSpec product(KernelSpec a, KernelSpec b);

    /// Throws config_error on invalid parameters (gamma <= 0, M < 1, ...).
    void validate() const;
};

/// Explicit random-feature embedding: z(x) = scale * cos(weights * x + offsets),
/// inducing the kernel k_M(x, x') = z(x) . z(x').
struct FeatureMap {
    Matrix weights;  // M x d
    Vector offsets;  // M
    double scale = 0.0;
    int num_features = 0;
    std::uint64_t seed = 0;

    Vector features(const Eigen::Ref<const Vector>& x) const;
};

/// Builds the deterministic feature map for a family id. The only built-in
/// family is "trig_gaussian" with params = {gamma}: weights are normal draws
/// scaled so the infinite-M limit is the Gaussian kernel, offsets uniform on
/// [0, 2*pi).
FeatureMap build_feature_map(const std::string& family, Index dim, int num_features,
                             std::uint64_t seed, const std::vector<double>& params);

/// Kernel compiled against a fixed input dimension; random-feature nodes have
/// their maps materialized once. Stateless after construction and safe to
/// share across threads.
class KernelEvaluator {
public:
    KernelEvaluator(const KernelSpec& spec, Index dim);
    ~KernelEvaluator();
    KernelEvaluator(const KernelEvaluator&);
    KernelEvaluator(KernelEvaluator&&) noexcept;

    double operator()(const Eigen::Ref<const Vector>& x,
                      const Eigen::Ref<const Vector>& y) const;

    Index dim() const { return dim_; }

    struct Node;

private:
    int compile(const KernelSpec& spec);
    double eval_node(const Node& node, const Eigen::Ref<const Vector>& x,
                     const Eigen::Ref<const Vector>& y) const;

    std::vector<Node> nodes_; // flattened tree, root at index 0
    Index dim_;
};

struct GramMatrix {
    Matrix entries;          // n x n, exactly symmetric
    KernelSpec kernel;
    std::uint64_t points_hash = 0; // digest of the input points
};

double eval_kernel(const KernelSpec& spec, const Eigen::Ref<const Vector>& x,
                   const Eigen::Ref<const Vector>& y);

/// Pairwise kernel matrix of a point set (rows are points). Only the upper
/// triangle is evaluated; the lower is mirrored, so entries[i][j] and
/// entries[j][i] are the same double.
GramMatrix gram(const KernelSpec& spec, const Eigen::Ref<const Matrix>& points);

/// Rectangular kernel matrix: entry (i, j) = k(rows[i], cols[j]).
Matrix cross_gram(const KernelSpec& spec, const Eigen::Ref<const Matrix>& rows,
                  const Eigen::Ref<const Matrix>& cols);

/// FNV-1a digest over the raw bytes of a matrix, row by row.
std::uint64_t hash_points(const Eigen::Ref<const Matrix>& points);

nlohmann::json kernel_to_json(const KernelSpec& spec);
KernelSpec kernel_from_json(const nlohmann::json& j);

namespace detail {
// Gaussian entries through ||x||^2 + ||y||^2 - 2 x.y with cached norms;
// used by gram() above this point count, direct subtraction below it.
constexpr Index expanded_form_threshold = Index(1) << 20;
Matrix gram_gaussian_expanded(double gamma, const Eigen::Ref<const Matrix>& points);
} // namespace detail

} // namespace kreg

#endif
