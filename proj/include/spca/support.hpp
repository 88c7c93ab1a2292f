#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace spca {

/// Sorted set of distinct coordinate indices, stored zero-based.
///
/// Supports compare lexicographically on their sorted index sequence, which
/// is the tie-breaking order used by every projection oracle in this library.
/// Printing uses one-based indices, matching the usual mathematical notation
/// where the root of the binary tree is node 1.
class SubspaceSupport {
public:
    SubspaceSupport() = default;

    /// Sorts and validates; throws std::invalid_argument on duplicates.
    explicit SubspaceSupport(std::vector<std::size_t> indices);

    static SubspaceSupport from_one_based(std::initializer_list<std::size_t> indices);
    static SubspaceSupport from_one_based(const std::vector<std::size_t>& indices);

    [[nodiscard]] const std::vector<std::size_t>& indices() const noexcept { return indices_; }
    [[nodiscard]] std::vector<std::size_t> one_based() const;
    [[nodiscard]] std::size_t size() const noexcept { return indices_.size(); }
    [[nodiscard]] bool empty() const noexcept { return indices_.empty(); }
    [[nodiscard]] bool contains(std::size_t index) const;
    [[nodiscard]] bool within(std::size_t dim) const noexcept;

    /// Set union; the result is again sorted.
    [[nodiscard]] SubspaceSupport unite(const SubspaceSupport& other) const;

    /// "{1,2,4}" in one-based notation.
    [[nodiscard]] std::string to_string() const;

    auto operator<=>(const SubspaceSupport&) const = default;
    bool operator==(const SubspaceSupport&) const = default;

private:
    std::vector<std::size_t> indices_;
};

}  // namespace spca
