#include "clusterlens/dendrogram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "clusterlens/errors.hpp"
#include "clusterlens/parallel.hpp"

namespace clusterlens {

namespace {

// Index of pair (i, j), i < j, in the condensed upper triangle.
inline std::size_t condensed_index(std::size_t n, std::size_t i, std::size_t j) {
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

inline double squared_distance(const double* a, const double* b, std::size_t d) {
    double acc = 0.0;
    for (std::size_t t = 0; t < d; ++t) {
        const double diff = a[t] - b[t];
        acc += diff * diff;
    }
    return acc;
}

struct RawMerge {
    std::size_t rep_a = 0;  // leaf representatives of the two clusters
    std::size_t rep_b = 0;
    double height = 0.0;
    std::size_t size = 0;
};

}  // namespace

const char* linkage_name(LinkageKind kind) {
    switch (kind) {
        case LinkageKind::ward: return "ward";
        case LinkageKind::average: return "average";
        case LinkageKind::complete: return "complete";
        case LinkageKind::single: return "single";
    }
    return "unknown";
}

std::vector<double> pairwise_distances(const EmbeddingMatrix& X, bool squared) {
    const std::size_t n = X.n;
    const std::size_t d = X.d;
    std::vector<double> dist(n < 2 ? 0 : n * (n - 1) / 2);
    if (n < 2) return dist;

    // Tile over row blocks so each block pair stays cache-resident.
    constexpr std::size_t kTile = 64;
    const std::size_t tiles = (n + kTile - 1) / kTile;
    std::vector<std::pair<std::size_t, std::size_t>> blocks;
    blocks.reserve(tiles * (tiles + 1) / 2);
    for (std::size_t bi = 0; bi < tiles; ++bi)
        for (std::size_t bj = bi; bj < tiles; ++bj) blocks.emplace_back(bi, bj);

    const double* data = X.data.data();
    auto fill_block = [&](std::size_t blk) {
        const auto [bi, bj] = blocks[blk];
        const std::size_t i_end = std::min(n, (bi + 1) * kTile);
        const std::size_t j_end = std::min(n, (bj + 1) * kTile);
        for (std::size_t i = bi * kTile; i < i_end; ++i) {
            const std::size_t j_begin = std::max(i + 1, bj * kTile);
            std::size_t idx = condensed_index(n, i, j_begin);
            const double* row_i = data + i * d;
            for (std::size_t j = j_begin; j < j_end; ++j, ++idx) {
                const double sq = squared_distance(row_i, data + j * d, d);
                dist[idx] = squared ? sq : std::sqrt(sq);
            }
        }
    };
    // Small inputs (per-superclass slices) stay serial; callers above may
    // already be running slices in parallel.
    if (n < 1024) {
        for (std::size_t blk = 0; blk < blocks.size(); ++blk) fill_block(blk);
    } else {
        parallel_for(blocks.size(), fill_block);
    }
    return dist;
}

MergeTree build_dendrogram(const EmbeddingMatrix& X, LinkageKind linkage) {
    const std::size_t n = X.n;
    if (n == 0) throw error(errc::empty_input, "cannot cluster an empty matrix");

    MergeTree tree;
    tree.leaf_count = n;
    if (n == 1) return tree;

    const bool ward = linkage == LinkageKind::ward;
    std::vector<double> dist = pairwise_distances(X, /*squared=*/ward);

    std::vector<double> size(n, 1.0);
    std::vector<std::size_t> active(n);
    std::iota(active.begin(), active.end(), std::size_t{0});

    auto d_at = [&](std::size_t a, std::size_t b) -> double& {
        return a < b ? dist[condensed_index(n, a, b)] : dist[condensed_index(n, b, a)];
    };

    std::vector<RawMerge> raw;
    raw.reserve(n - 1);
    std::vector<std::size_t> chain;
    chain.reserve(n);

    auto remove_active = [&](std::size_t rep) {
        const auto it = std::find(active.begin(), active.end(), rep);
        *it = active.back();
        active.pop_back();
    };

    while (raw.size() + 1 < n) {
        if (chain.size() < 2) {
            chain.clear();
            // Deterministic restart: smallest active representative.
            chain.push_back(*std::min_element(active.begin(), active.end()));
        }
        for (;;) {
            const std::size_t c = chain.back();
            const bool has_prev = chain.size() >= 2;
            const std::size_t prev = has_prev ? chain[chain.size() - 2] : 0;

            // Nearest neighbor of c. The chain predecessor wins ties so a
            // reciprocal pair always terminates; other ties go to the
            // smallest id, which keeps the whole walk deterministic.
            std::size_t best = has_prev ? prev : std::numeric_limits<std::size_t>::max();
            double best_d = has_prev ? d_at(c, prev) : std::numeric_limits<double>::infinity();
            for (std::size_t k : active) {
                if (k == c || (has_prev && k == prev)) continue;
                const double dk = d_at(c, k);
                if (dk < best_d || (dk == best_d && (!has_prev || best != prev) && k < best)) {
                    best_d = dk;
                    best = k;
                }
            }

            if (has_prev && best == prev) {
                // Reciprocal nearest neighbors: merge c and prev.
                chain.pop_back();
                chain.pop_back();
                const std::size_t x = std::min(c, prev);
                const std::size_t y = std::max(c, prev);
                const double d_xy = d_at(x, y);
                const double s_x = size[x];
                const double s_y = size[y];

                RawMerge m;
                m.rep_a = x;
                m.rep_b = y;
                m.height = ward ? std::sqrt(std::max(0.0, d_xy)) : d_xy;
                m.size = static_cast<std::size_t>(s_x + s_y);
                raw.push_back(m);

                remove_active(y);
                size[x] = s_x + s_y;

                // Lance-Williams update of d(x u y, k), stored at slot x.
                switch (linkage) {
                    case LinkageKind::ward:
                        for (std::size_t k : active) {
                            if (k == x) continue;
                            const double s_k = size[k];
                            d_at(x, k) = ((s_x + s_k) * d_at(x, k) + (s_y + s_k) * d_at(y, k) - s_k * d_xy) /
                                         (s_x + s_y + s_k);
                        }
                        break;
                    case LinkageKind::average:
                        for (std::size_t k : active) {
                            if (k == x) continue;
                            d_at(x, k) = (s_x * d_at(x, k) + s_y * d_at(y, k)) / (s_x + s_y);
                        }
                        break;
                    case LinkageKind::complete:
                        for (std::size_t k : active) {
                            if (k == x) continue;
                            d_at(x, k) = std::max(d_at(x, k), d_at(y, k));
                        }
                        break;
                    case LinkageKind::single:
                        for (std::size_t k : active) {
                            if (k == x) continue;
                            d_at(x, k) = std::min(d_at(x, k), d_at(y, k));
                        }
                        break;
                }
                break;
            }
            chain.push_back(best);
        }
    }

    // Canonical order: by height, ties by emission order.
    std::stable_sort(raw.begin(), raw.end(),
                     [](const RawMerge& a, const RawMerge& b) { return a.height < b.height; });

    // Renumber clusters into node ids following the sorted order.
    std::vector<std::size_t> uf_parent(n);
    std::iota(uf_parent.begin(), uf_parent.end(), std::size_t{0});
    std::vector<std::size_t> node_of_root(n);
    std::iota(node_of_root.begin(), node_of_root.end(), std::size_t{0});
    auto find_root = [&](std::size_t v) {
        std::size_t root = v;
        while (uf_parent[root] != root) root = uf_parent[root];
        while (uf_parent[v] != root) {
            const std::size_t next = uf_parent[v];
            uf_parent[v] = root;
            v = next;
        }
        return root;
    };

    tree.merges.reserve(n - 1);
    for (std::size_t m = 0; m < raw.size(); ++m) {
        const std::size_t root_a = find_root(raw[m].rep_a);
        const std::size_t root_b = find_root(raw[m].rep_b);
        const std::size_t node_a = node_of_root[root_a];
        const std::size_t node_b = node_of_root[root_b];
        tree.merges.push_back({std::min(node_a, node_b), std::max(node_a, node_b), raw[m].height, raw[m].size});
        uf_parent[root_a] = root_b;
        node_of_root[root_b] = n + m;
    }
    return tree;
}

ClusterAssignment cut(const MergeTree& tree, std::size_t k) {
    const std::size_t n = tree.leaf_count;
    if (k < 1 || k > n)
        throw error(errc::k_out_of_range,
                    "k = " + std::to_string(k) + " outside 1.." + std::to_string(n));

    // Applying the first n-k merges leaves exactly k clusters.
    const std::size_t applied = n - k;
    std::vector<std::size_t> parent(n + applied);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    for (std::size_t m = 0; m < applied; ++m) {
        parent[tree.merges[m].left] = n + m;
        parent[tree.merges[m].right] = n + m;
    }

    auto find_root = [&](std::size_t v) {
        std::size_t root = v;
        while (parent[root] != root) root = parent[root];
        while (parent[v] != root) {
            const std::size_t next = parent[v];
            parent[v] = root;
            v = next;
        }
        return root;
    };

    ClusterAssignment out;
    out.labels.assign(n, -1);
    std::vector<std::int64_t> cluster_of_root(n + applied, -1);
    std::int64_t next_id = 0;
    for (std::size_t leaf = 0; leaf < n; ++leaf) {
        const std::size_t root = find_root(leaf);
        if (cluster_of_root[root] < 0) cluster_of_root[root] = next_id++;
        out.labels[leaf] = cluster_of_root[root];
    }
    out.k = static_cast<std::size_t>(next_id);
    return out;
}

ClusterAssignment agglomerative(const EmbeddingMatrix& X, LinkageKind linkage, std::size_t k) {
    return cut(build_dendrogram(X, linkage), k);
}

}  // namespace clusterlens
