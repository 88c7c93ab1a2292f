#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "spca/support.hpp"

namespace spca {

/// Any k coordinates out of d.
struct KSparse {
    std::size_t d;
    std::size_t k;
};

/// Rooted connected subtrees of size k in the complete binary tree with
/// d = 2^h - 1 nodes; node i (one-based) has parent floor(i/2).
struct TreeSparse {
    std::size_t h;
    std::size_t k;
};

/// Source, terminal and one vertex per layer of a (d,k)-layered graph.
/// Vertex 1 is the source, vertex d the terminal, and layer l (1..k) is the
/// contiguous block {2 + (l-1)w, ..., 1 + l w} with w = (d-2)/k.
struct PathSparse {
    std::size_t d;
    std::size_t k;
};

enum class Variant { ksparse, tree, path };

[[nodiscard]] std::string to_string(Variant v);
[[nodiscard]] Variant variant_from_string(const std::string& name);

inline constexpr double kDefaultEnumerationBudget = 1e7;

/// Union of coordinate subspaces, one of the three concrete families.
///
/// Immutable value type. Construction validates the variant invariants and
/// throws std::invalid_argument on inconsistent parameters.
class SparsityStructure {
public:
    explicit SparsityStructure(KSparse s);
    explicit SparsityStructure(TreeSparse s);
    explicit SparsityStructure(PathSparse s);

    /// From a descriptor record; for trees d must equal 2^h - 1.
    static SparsityStructure from_descriptor(Variant variant, std::size_t d, std::size_t k);

    [[nodiscard]] Variant variant() const noexcept;
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    /// The sparsity parameter k as given in the descriptor.
    [[nodiscard]] std::size_t k() const noexcept { return k_; }
    /// Number of coordinates retained by each subspace (k + 2 for paths).
    [[nodiscard]] std::size_t support_size() const noexcept;
    [[nodiscard]] std::string describe() const;

    [[nodiscard]] const std::variant<KSparse, TreeSparse, PathSparse>& params() const noexcept { return params_; }

    /// Layered-graph helpers (PathSparse only).
    [[nodiscard]] std::size_t layer_width() const;
    /// Zero-based index range [first, last) of layer l in 0..k-1.
    [[nodiscard]] std::pair<std::size_t, std::size_t> layer_range(std::size_t layer) const;

private:
    std::variant<KSparse, TreeSparse, PathSparse> params_;
    std::size_t dim_{};
    std::size_t k_{};
};

struct Projection {
    Eigen::VectorXd projected;
    SubspaceSupport support;
};

/// Exact Euclidean projection onto the union of subspaces. Keeps the entries
/// of v on the support maximising the retained energy (ties: lexicographically
/// smallest support) and zeros elsewhere. No normalisation.
[[nodiscard]] Projection project(const SparsityStructure& s, const Eigen::VectorXd& v);

/// project() followed by scaling to unit norm; throws DegenerateProjection on zero.
[[nodiscard]] Projection project_normalized(const SparsityStructure& s, const Eigen::VectorXd& v);

/// Exact number of supports, as a double (may exceed 2^64 for large k-sparse).
[[nodiscard]] double count_supports(const SparsityStructure& s);

/// Visits every support exactly once in lexicographic order.
/// Throws BudgetExceeded before visiting anything if count > budget.
void for_each_support(const SparsityStructure& s, const std::function<void(const SubspaceSupport&)>& visit,
                      double budget = kDefaultEnumerationBudget);

[[nodiscard]] std::vector<SubspaceSupport> enumerate_supports(const SparsityStructure& s,
                                                              double budget = kDefaultEnumerationBudget);

/// Structural membership test for a support (exact equality with one of the subspaces).
[[nodiscard]] bool contains(const SparsityStructure& s, const SubspaceSupport& support);

/// Whether v lies in the union, i.e. supp(v) is a subset of some enumerated support.
[[nodiscard]] bool in_model(const SparsityStructure& s, const Eigen::VectorXd& v);

/// Lexicographically first support.
[[nodiscard]] SubspaceSupport first_support(const SparsityStructure& s);

/// A ground-truth unit vector: seeded support choice with entries +-1/sqrt(support_size).
[[nodiscard]] Eigen::VectorXd random_ground_truth(const SparsityStructure& s, std::uint64_t sign_seed);

/// Unit vector with entries sign_i / sqrt(|support|) on the given support, seeded signs.
[[nodiscard]] Eigen::VectorXd signed_indicator(std::size_t dim, const SubspaceSupport& support,
                                               std::uint64_t sign_seed);

/// The leftmost depth-first rooted subtree of size k (trees); for the other
/// variants the lexicographically first support.
[[nodiscard]] SubspaceSupport default_truth_support(const SparsityStructure& s);

/// Indices of the nonzero entries of v.
[[nodiscard]] SubspaceSupport support_of(const Eigen::VectorXd& v);

}  // namespace spca
