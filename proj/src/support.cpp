#include "spca/support.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace spca {

SubspaceSupport::SubspaceSupport(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
    std::sort(indices_.begin(), indices_.end());
    if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
        throw std::invalid_argument("SubspaceSupport: duplicate index");
    }
}

SubspaceSupport SubspaceSupport::from_one_based(std::initializer_list<std::size_t> indices) {
    return from_one_based(std::vector<std::size_t>(indices));
}

SubspaceSupport SubspaceSupport::from_one_based(const std::vector<std::size_t>& indices) {
    std::vector<std::size_t> zero;
    zero.reserve(indices.size());
    for (auto i : indices) {
        if (i == 0) {
            throw std::invalid_argument("SubspaceSupport: one-based index 0");
        }
        zero.push_back(i - 1);
    }
    return SubspaceSupport(std::move(zero));
}

std::vector<std::size_t> SubspaceSupport::one_based() const {
    std::vector<std::size_t> out(indices_);
    for (auto& i : out) {
        ++i;
    }
    return out;
}

bool SubspaceSupport::contains(std::size_t index) const {
    return std::binary_search(indices_.begin(), indices_.end(), index);
}

bool SubspaceSupport::within(std::size_t dim) const noexcept {
    return indices_.empty() || indices_.back() < dim;
}

SubspaceSupport SubspaceSupport::unite(const SubspaceSupport& other) const {
    SubspaceSupport out;
    out.indices_.reserve(indices_.size() + other.indices_.size());
    std::set_union(indices_.begin(), indices_.end(), other.indices_.begin(), other.indices_.end(),
                   std::back_inserter(out.indices_));
    return out;
}

std::string SubspaceSupport::to_string() const {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < indices_.size(); ++i) {
        if (i != 0) {
            os << ',';
        }
        os << indices_[i] + 1;
    }
    os << '}';
    return os.str();
}

}  // namespace spca
