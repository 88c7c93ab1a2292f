#include "spca/structures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "spca/errors.hpp"
#include "spca/rng.hpp"

namespace spca {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Zero-based binary-tree navigation: children of j are 2j+1 and 2j+2.
constexpr std::size_t parent_of(std::size_t j) noexcept { return (j - 1) / 2; }

void check_dim(const SparsityStructure& s, const Eigen::VectorXd& v) {
    if (static_cast<std::size_t>(v.size()) != s.dim()) {
        throw std::invalid_argument("dimension mismatch: structure has d=" + std::to_string(s.dim()) +
                                    ", vector has length " + std::to_string(v.size()));
    }
}

Projection restrict_to(const Eigen::VectorXd& v, SubspaceSupport support) {
    Projection out{Eigen::VectorXd::Zero(v.size()), std::move(support)};
    for (auto i : out.support.indices()) {
        out.projected[static_cast<Eigen::Index>(i)] = v[static_cast<Eigen::Index>(i)];
    }
    return out;
}

SubspaceSupport project_ksparse(const KSparse& p, const Eigen::VectorXd& v) {
    std::vector<std::size_t> order(p.d);
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Larger magnitude first; equal magnitudes resolve to the smaller index.
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(p.k), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          const double wa = std::abs(v[static_cast<Eigen::Index>(a)]);
                          const double wb = std::abs(v[static_cast<Eigen::Index>(b)]);
                          return wa != wb ? wa > wb : a < b;
                      });
    order.resize(p.k);
    return SubspaceSupport(std::move(order));
}

// Rooted-subtree knapsack. table[j][s] holds the best energy of a connected
// subtree of size s rooted at j, together with the lexicographically smallest
// index set attaining it. Because the left and right subtrees of j are
// disjoint, lexicographic minimality composes across the merge.
SubspaceSupport project_tree(const TreeSparse& p, std::size_t d, const Eigen::VectorXd& v) {
    struct Entry {
        double value;
        std::vector<std::size_t> nodes;
    };
    const std::size_t k = p.k;
    std::vector<std::vector<Entry>> table(d);
    std::vector<std::size_t> subtree_size(d, 1);

    auto better = [](double value, const std::vector<std::size_t>& nodes, const Entry& incumbent) {
        if (value != incumbent.value) {
            return value > incumbent.value;
        }
        return nodes < incumbent.nodes;
    };

    for (std::size_t jj = d; jj-- > 0;) {
        const double w = v[static_cast<Eigen::Index>(jj)] * v[static_cast<Eigen::Index>(jj)];
        const std::size_t left = 2 * jj + 1;
        const std::size_t right = 2 * jj + 2;
        const bool has_children = left < d;
        static const std::vector<Entry> kEmpty;
        const std::vector<Entry>& lt = has_children ? table[left] : kEmpty;
        const std::vector<Entry>& rt = has_children ? table[right] : kEmpty;
        const std::size_t lsize = has_children ? subtree_size[left] : 0;
        const std::size_t rsize = has_children ? subtree_size[right] : 0;
        subtree_size[jj] = 1 + lsize + rsize;
        const std::size_t cap = std::min(k, subtree_size[jj]);

        std::vector<Entry> mine(cap + 1);
        mine[0] = Entry{0.0, {}};
        std::vector<std::size_t> candidate;
        for (std::size_t s = 1; s <= cap; ++s) {
            bool found = false;
            Entry& slot = mine[s];
            const std::size_t a_max = std::min(s - 1, std::min(lsize, k));
            for (std::size_t a = 0; a <= a_max; ++a) {
                const std::size_t b = s - 1 - a;
                if (b > std::min(rsize, k)) {
                    continue;
                }
                const double lv = a == 0 ? 0.0 : lt[a].value;
                const double rv = b == 0 ? 0.0 : rt[b].value;
                const double value = w + lv + rv;
                if (found && value < slot.value) {
                    continue;
                }
                candidate.clear();
                candidate.push_back(jj);
                if (a > 0 && b > 0) {
                    std::merge(lt[a].nodes.begin(), lt[a].nodes.end(), rt[b].nodes.begin(), rt[b].nodes.end(),
                               std::back_inserter(candidate));
                } else if (a > 0) {
                    candidate.insert(candidate.end(), lt[a].nodes.begin(), lt[a].nodes.end());
                } else if (b > 0) {
                    candidate.insert(candidate.end(), rt[b].nodes.begin(), rt[b].nodes.end());
                }
                if (!found || better(value, candidate, slot)) {
                    slot.value = value;
                    slot.nodes = candidate;
                    found = true;
                }
            }
        }
        table[jj] = std::move(mine);
        if (has_children) {
            // Children are never read again.
            std::vector<Entry>().swap(table[left]);
            std::vector<Entry>().swap(table[right]);
        }
    }
    return SubspaceSupport(std::move(table[0][k].nodes));
}

SubspaceSupport project_path(const SparsityStructure& s, const Eigen::VectorXd& v) {
    std::vector<std::size_t> picks;
    picks.reserve(s.support_size());
    picks.push_back(0);
    for (std::size_t layer = 0; layer < s.k(); ++layer) {
        const auto [first, last] = s.layer_range(layer);
        std::size_t best = first;
        for (std::size_t i = first + 1; i < last; ++i) {
            if (std::abs(v[static_cast<Eigen::Index>(i)]) > std::abs(v[static_cast<Eigen::Index>(best)])) {
                best = i;
            }
        }
        picks.push_back(best);
    }
    picks.push_back(s.dim() - 1);
    return SubspaceSupport(std::move(picks));
}

double binomial(std::size_t n, std::size_t k) {
    k = std::min(k, n - k);
    double out = 1.0;
    for (std::size_t i = 1; i <= k; ++i) {
        out = out * static_cast<double>(n - k + i) / static_cast<double>(i);
    }
    return std::round(out);
}

// Number of rooted subtrees of each size 0..k in a complete tree of the given
// height, where size 0 counts the empty choice.
std::vector<double> optional_subtree_counts(std::size_t height, std::size_t k) {
    std::vector<double> counts(k + 1, 0.0);
    counts[0] = 1.0;
    if (height == 0) {
        return counts;
    }
    const auto child = optional_subtree_counts(height - 1, k);
    for (std::size_t s = 1; s <= k; ++s) {
        double total = 0.0;
        for (std::size_t a = 0; a <= s - 1; ++a) {
            total += child[a] * child[s - 1 - a];
        }
        counts[s] = total;
    }
    return counts;
}

void enumerate_combinations(std::size_t d, std::size_t k, const std::function<void(const SubspaceSupport&)>& visit) {
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    while (true) {
        visit(SubspaceSupport(idx));
        std::size_t pos = k;
        while (pos > 0 && idx[pos - 1] == d - k + pos - 1) {
            --pos;
        }
        if (pos == 0) {
            return;
        }
        ++idx[pos - 1];
        for (std::size_t j = pos; j < k; ++j) {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

// Include/exclude recursion over the frontier visits each rooted connected
// subset exactly once.
void grow_subtrees(std::size_t d, std::size_t k, std::vector<std::size_t>& chosen, std::vector<std::size_t>& frontier,
                   std::vector<SubspaceSupport>& out) {
    if (chosen.size() == k) {
        out.emplace_back(chosen);
        return;
    }
    if (frontier.empty()) {
        return;
    }
    const std::size_t node = frontier.back();
    frontier.pop_back();

    // Include node.
    chosen.push_back(node);
    const std::size_t pushed_before = frontier.size();
    for (std::size_t c : {2 * node + 2, 2 * node + 1}) {
        if (c < d) {
            frontier.push_back(c);
        }
    }
    grow_subtrees(d, k, chosen, frontier, out);
    frontier.resize(pushed_before);
    chosen.pop_back();

    // Exclude node permanently.
    grow_subtrees(d, k, chosen, frontier, out);
    frontier.push_back(node);
}

std::vector<SubspaceSupport> enumerate_subtrees(std::size_t d, std::size_t k) {
    std::vector<SubspaceSupport> out;
    std::vector<std::size_t> chosen{0};
    std::vector<std::size_t> frontier;
    for (std::size_t c : {std::size_t{2}, std::size_t{1}}) {
        if (c < d) {
            frontier.push_back(c);
        }
    }
    grow_subtrees(d, k, chosen, frontier, out);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::string to_string(Variant v) {
    switch (v) {
        case Variant::ksparse:
            return "ksparse";
        case Variant::tree:
            return "tree";
        case Variant::path:
            return "path";
    }
    return "unknown";
}

Variant variant_from_string(const std::string& name) {
    if (name == "ksparse") {
        return Variant::ksparse;
    }
    if (name == "tree") {
        return Variant::tree;
    }
    if (name == "path") {
        return Variant::path;
    }
    throw std::invalid_argument("unknown structure variant '" + name + "' (expected tree, path or ksparse)");
}

SparsityStructure::SparsityStructure(KSparse s) : params_(s), dim_(s.d), k_(s.k) {
    if (s.k < 1 || s.k > s.d) {
        throw std::invalid_argument("KSparse requires 1 <= k <= d");
    }
}

SparsityStructure::SparsityStructure(TreeSparse s) : params_(s), k_(s.k) {
    if (s.h < 1 || s.h > 40) {
        throw std::invalid_argument("TreeSparse requires 1 <= h <= 40");
    }
    dim_ = (std::size_t{1} << s.h) - 1;
    if (s.k < 1 || s.k > dim_) {
        throw std::invalid_argument("TreeSparse requires 1 <= k <= d");
    }
}

SparsityStructure::SparsityStructure(PathSparse s) : params_(s), dim_(s.d), k_(s.k) {
    if (s.k < 1 || s.d < s.k + 2 || (s.d - 2) % s.k != 0) {
        throw std::invalid_argument("PathSparse requires k >= 1, d >= k + 2 and (d - 2) divisible by k");
    }
}

SparsityStructure SparsityStructure::from_descriptor(Variant variant, std::size_t d, std::size_t k) {
    switch (variant) {
        case Variant::ksparse:
            return SparsityStructure(KSparse{d, k});
        case Variant::path:
            return SparsityStructure(PathSparse{d, k});
        case Variant::tree: {
            std::size_t h = 0;
            while (h < 40 && ((std::size_t{1} << h) - 1) < d) {
                ++h;
            }
            if (h == 0 || ((std::size_t{1} << h) - 1) != d) {
                throw std::invalid_argument("tree structure requires d = 2^h - 1, got d=" + std::to_string(d));
            }
            return SparsityStructure(TreeSparse{h, k});
        }
    }
    throw std::invalid_argument("unknown variant");
}

Variant SparsityStructure::variant() const noexcept {
    return std::visit(overloaded{[](const KSparse&) { return Variant::ksparse; },
                                 [](const TreeSparse&) { return Variant::tree; },
                                 [](const PathSparse&) { return Variant::path; }},
                      params_);
}

std::size_t SparsityStructure::support_size() const noexcept {
    return variant() == Variant::path ? k_ + 2 : k_;
}

std::string SparsityStructure::describe() const {
    std::ostringstream os;
    os << to_string(variant()) << "(d=" << dim_ << ", k=" << k_ << ')';
    return os.str();
}

std::size_t SparsityStructure::layer_width() const {
    if (variant() != Variant::path) {
        throw std::logic_error("layer_width: not a path structure");
    }
    return (dim_ - 2) / k_;
}

std::pair<std::size_t, std::size_t> SparsityStructure::layer_range(std::size_t layer) const {
    const std::size_t w = layer_width();
    if (layer >= k_) {
        throw std::out_of_range("layer index out of range");
    }
    return {1 + layer * w, 1 + (layer + 1) * w};
}

Projection project(const SparsityStructure& s, const Eigen::VectorXd& v) {
    check_dim(s, v);
    SubspaceSupport support = std::visit(
        overloaded{[&](const KSparse& p) { return project_ksparse(p, v); },
                   [&](const TreeSparse& p) { return project_tree(p, s.dim(), v); },
                   [&](const PathSparse&) { return project_path(s, v); }},
        s.params());
    return restrict_to(v, std::move(support));
}

Projection project_normalized(const SparsityStructure& s, const Eigen::VectorXd& v) {
    Projection out = project(s, v);
    const double norm = out.projected.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw DegenerateProjection();
    }
    out.projected /= norm;
    return out;
}

double count_supports(const SparsityStructure& s) {
    return std::visit(overloaded{[](const KSparse& p) { return binomial(p.d, p.k); },
                                 [](const TreeSparse& p) { return optional_subtree_counts(p.h, p.k)[p.k]; },
                                 [&](const PathSparse& p) {
                                     return std::pow(static_cast<double>((p.d - 2) / p.k), static_cast<double>(p.k));
                                 }},
                      s.params());
}

void for_each_support(const SparsityStructure& s, const std::function<void(const SubspaceSupport&)>& visit,
                      double budget) {
    const double count = count_supports(s);
    if (count > budget) {
        throw BudgetExceeded("enumerating " + s.describe(), count, budget);
    }
    switch (s.variant()) {
        case Variant::ksparse:
            enumerate_combinations(s.dim(), s.k(), visit);
            return;
        case Variant::tree:
            for (const auto& support : enumerate_subtrees(s.dim(), s.k())) {
                visit(support);
            }
            return;
        case Variant::path: {
            const std::size_t w = s.layer_width();
            std::vector<std::size_t> choice(s.k(), 0);
            std::vector<std::size_t> idx(s.k() + 2);
            while (true) {
                idx.front() = 0;
                for (std::size_t l = 0; l < s.k(); ++l) {
                    idx[l + 1] = 1 + l * w + choice[l];
                }
                idx.back() = s.dim() - 1;
                visit(SubspaceSupport(idx));
                std::size_t pos = s.k();
                while (pos > 0 && choice[pos - 1] == w - 1) {
                    choice[pos - 1] = 0;
                    --pos;
                }
                if (pos == 0) {
                    return;
                }
                ++choice[pos - 1];
            }
        }
    }
}

std::vector<SubspaceSupport> enumerate_supports(const SparsityStructure& s, double budget) {
    std::vector<SubspaceSupport> out;
    for_each_support(s, [&](const SubspaceSupport& support) { out.push_back(support); }, budget);
    return out;
}

bool contains(const SparsityStructure& s, const SubspaceSupport& support) {
    if (!support.within(s.dim()) || support.size() != s.support_size()) {
        return false;
    }
    const auto& idx = support.indices();
    switch (s.variant()) {
        case Variant::ksparse:
            return true;
        case Variant::tree:
            if (idx.front() != 0) {
                return false;
            }
            return std::all_of(idx.begin() + 1, idx.end(), [&](std::size_t j) { return support.contains(parent_of(j)); });
        case Variant::path: {
            if (idx.front() != 0 || idx.back() != s.dim() - 1) {
                return false;
            }
            // Middle entries are sorted, so one per layer means the l-th middle entry sits in layer l.
            for (std::size_t l = 0; l < s.k(); ++l) {
                const auto [first, last] = s.layer_range(l);
                if (idx[l + 1] < first || idx[l + 1] >= last) {
                    return false;
                }
            }
            return true;
        }
    }
    return false;
}

bool in_model(const SparsityStructure& s, const Eigen::VectorXd& v) {
    check_dim(s, v);
    const SubspaceSupport nz = support_of(v);
    switch (s.variant()) {
        case Variant::ksparse:
            return nz.size() <= s.k();
        case Variant::tree: {
            std::vector<bool> closure(s.dim(), false);
            std::size_t count = 0;
            auto mark = [&](std::size_t j) {
                if (!closure[j]) {
                    closure[j] = true;
                    ++count;
                }
            };
            mark(0);
            for (auto j : nz.indices()) {
                for (std::size_t a = j; a != 0 && !closure[a]; a = parent_of(a)) {
                    mark(a);
                }
            }
            return count <= s.k();
        }
        case Variant::path:
            for (std::size_t l = 0; l < s.k(); ++l) {
                const auto [first, last] = s.layer_range(l);
                std::size_t hits = 0;
                for (std::size_t i = first; i < last; ++i) {
                    hits += v[static_cast<Eigen::Index>(i)] != 0.0 ? 1 : 0;
                }
                if (hits > 1) {
                    return false;
                }
            }
            return true;
    }
    return false;
}

SubspaceSupport first_support(const SparsityStructure& s) {
    switch (s.variant()) {
        case Variant::ksparse:
        case Variant::tree: {
            // {1..k} is connected under floor(i/2) and lexicographically minimal.
            std::vector<std::size_t> idx(s.k());
            std::iota(idx.begin(), idx.end(), std::size_t{0});
            return SubspaceSupport(std::move(idx));
        }
        case Variant::path: {
            std::vector<std::size_t> idx{0};
            for (std::size_t l = 0; l < s.k(); ++l) {
                idx.push_back(s.layer_range(l).first);
            }
            idx.push_back(s.dim() - 1);
            return SubspaceSupport(std::move(idx));
        }
    }
    return {};
}

Eigen::VectorXd signed_indicator(std::size_t dim, const SubspaceSupport& support, std::uint64_t sign_seed) {
    if (support.empty() || !support.within(dim)) {
        throw std::invalid_argument("signed_indicator: support empty or out of range");
    }
    auto engine = rng::make_engine(rng::derive(sign_seed, {0x5167ULL}));
    std::bernoulli_distribution coin(0.5);
    const double magnitude = 1.0 / std::sqrt(static_cast<double>(support.size()));
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
    for (auto i : support.indices()) {
        v[static_cast<Eigen::Index>(i)] = coin(engine) ? magnitude : -magnitude;
    }
    return v;
}

Eigen::VectorXd random_ground_truth(const SparsityStructure& s, std::uint64_t sign_seed) {
    auto engine = rng::make_engine(rng::derive(sign_seed, {0x5077ULL}));
    SubspaceSupport support;
    switch (s.variant()) {
        case Variant::ksparse: {
            std::vector<std::size_t> all(s.dim());
            std::iota(all.begin(), all.end(), std::size_t{0});
            std::vector<std::size_t> pick;
            std::sample(all.begin(), all.end(), std::back_inserter(pick), static_cast<std::ptrdiff_t>(s.k()), engine);
            support = SubspaceSupport(std::move(pick));
            break;
        }
        case Variant::path: {
            std::vector<std::size_t> pick{0};
            std::uniform_int_distribution<std::size_t> offset(0, s.layer_width() - 1);
            for (std::size_t l = 0; l < s.k(); ++l) {
                pick.push_back(s.layer_range(l).first + offset(engine));
            }
            pick.push_back(s.dim() - 1);
            support = SubspaceSupport(std::move(pick));
            break;
        }
        case Variant::tree: {
            constexpr double kUniformLimit = 1e5;
            if (count_supports(s) <= kUniformLimit) {
                const auto all = enumerate_supports(s);
                std::uniform_int_distribution<std::size_t> which(0, all.size() - 1);
                support = all[which(engine)];
            } else {
                // Grow from the root, adding a uniformly chosen frontier node each step.
                std::vector<std::size_t> chosen{0};
                std::vector<std::size_t> frontier;
                auto push_children = [&](std::size_t j) {
                    for (std::size_t c : {2 * j + 1, 2 * j + 2}) {
                        if (c < s.dim()) {
                            frontier.push_back(c);
                        }
                    }
                };
                push_children(0);
                while (chosen.size() < s.k()) {
                    std::uniform_int_distribution<std::size_t> which(0, frontier.size() - 1);
                    const std::size_t at = which(engine);
                    const std::size_t node = frontier[at];
                    frontier.erase(frontier.begin() + static_cast<std::ptrdiff_t>(at));
                    chosen.push_back(node);
                    push_children(node);
                }
                support = SubspaceSupport(std::move(chosen));
            }
            break;
        }
    }
    return signed_indicator(s.dim(), support, rng::derive(sign_seed, {0x519eULL, engine()}));
}

SubspaceSupport default_truth_support(const SparsityStructure& s) {
    if (s.variant() != Variant::tree) {
        return first_support(s);
    }
    std::vector<std::size_t> order;
    std::vector<std::size_t> stack{0};
    while (!stack.empty() && order.size() < s.k()) {
        const std::size_t j = stack.back();
        stack.pop_back();
        order.push_back(j);
        if (2 * j + 2 < s.dim()) {
            stack.push_back(2 * j + 2);
        }
        if (2 * j + 1 < s.dim()) {
            stack.push_back(2 * j + 1);
        }
    }
    return SubspaceSupport(std::move(order));
}

SubspaceSupport support_of(const Eigen::VectorXd& v) {
    std::vector<std::size_t> idx;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (v[i] != 0.0) {
            idx.push_back(static_cast<std::size_t>(i));
        }
    }
    return SubspaceSupport(std::move(idx));
}

}  // namespace spca
