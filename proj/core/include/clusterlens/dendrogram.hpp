#pragma once

#include <cstddef>
#include <vector>

#include "clusterlens/assignment.hpp"
#include "clusterlens/embedding.hpp"

namespace clusterlens {

enum class LinkageKind { ward, average, complete, single };

const char* linkage_name(LinkageKind kind);

/// One dendrogram merge. Node ids: leaves 0..n-1, internal nodes n..2n-2 in
/// merge order; left < right.
struct Merge {
    std::size_t left = 0;
    std::size_t right = 0;
    double height = 0.0;
    std::size_t size = 0;  // leaves under the merged node

    bool operator==(const Merge&) const = default;
};

/// Full merge history, ordered by height (ties keep emission order).
struct MergeTree {
    std::size_t leaf_count = 0;
    std::vector<Merge> merges;  // exactly leaf_count - 1 entries

    bool operator==(const MergeTree&) const = default;
};

/// Condensed upper-triangle pairwise dissimilarities (64-bit, n*(n-1)/2
/// entries): squared Euclidean when `squared`, else Euclidean. Tiled and
/// optionally computed on multiple threads; every entry is an independent
/// expression of the two rows, so the result is identical to sequential
/// evaluation.
std::vector<double> pairwise_distances(const EmbeddingMatrix& X, bool squared);

/// Agglomerative clustering via nearest-neighbor chains, with inter-cluster
/// dissimilarities maintained by the Lance-Williams recurrence of the chosen
/// linkage. Ward updates run on squared Euclidean dissimilarities and merge
/// heights are sqrt(2 * SSE increase), so two singletons merge at their
/// Euclidean distance; the other linkages use plain Euclidean distances.
/// Throws EmptyInput when n = 0.
MergeTree build_dendrogram(const EmbeddingMatrix& X, LinkageKind linkage);

/// Flat clustering with exactly k clusters, obtained by suppressing the last
/// k-1 merges in height order (ties by merge order). Cluster ids are
/// assigned by first occurrence, so cut(tree, k') for k' > k refines
/// cut(tree, k). Throws KOutOfRange unless 1 <= k <= n.
ClusterAssignment cut(const MergeTree& tree, std::size_t k);

/// build_dendrogram followed by cut.
ClusterAssignment agglomerative(const EmbeddingMatrix& X, LinkageKind linkage, std::size_t k);

}  // namespace clusterlens
