#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace clusterlens {

/// Flat clustering: labels[i] in 0..k-1; every id in that range is used at
/// least once whenever k <= n.
struct ClusterAssignment {
    std::vector<std::int64_t> labels;
    std::size_t k = 0;

    std::size_t size() const { return labels.size(); }
    bool operator==(const ClusterAssignment&) const = default;
};

/// Renumbers cluster ids by first occurrence (scanning samples 0..n-1), so
/// equal partitions get equal label vectors regardless of original ids.
ClusterAssignment canonicalize(const ClusterAssignment& assignment);

}  // namespace clusterlens
