#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>

namespace oracles {

namespace {

using clusterlens::EmbeddingMatrix;
using clusterlens::LinkageKind;

std::vector<double> point_distance_matrix(const EmbeddingMatrix& X) {
    std::vector<double> dist(X.n * X.n, 0.0);
    for (std::size_t i = 0; i < X.n; ++i)
        for (std::size_t j = i + 1; j < X.n; ++j) {
            double sq = 0.0;
            for (std::size_t t = 0; t < X.d; ++t) {
                const double diff = X.data[i * X.d + t] - X.data[j * X.d + t];
                sq += diff * diff;
            }
            dist[i * X.n + j] = dist[j * X.n + i] = std::sqrt(sq);
        }
    return dist;
}

std::vector<std::int64_t> first_occurrence_labels(const std::vector<std::size_t>& root_of, std::size_t n) {
    std::vector<std::int64_t> labels(n);
    std::map<std::size_t, std::int64_t> ids;
    std::int64_t next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        auto [it, inserted] = ids.emplace(root_of[i], next);
        if (inserted) ++next;
        labels[i] = it->second;
    }
    return labels;
}

// Union-find replay of a merge-rep sequence; returns first-occurrence labels.
std::vector<std::int64_t> replay_labels(
    const std::vector<std::pair<std::size_t, std::size_t>>& merge_reps, std::size_t n, std::size_t k) {
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    std::function<std::size_t(std::size_t)> find = [&](std::size_t v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    for (std::size_t m = 0; m + k < n; ++m) parent[find(merge_reps[m].first)] = find(merge_reps[m].second);
    std::vector<std::size_t> root_of(n);
    for (std::size_t i = 0; i < n; ++i) root_of[i] = find(i);
    return first_occurrence_labels(root_of, n);
}

}  // namespace

NaiveAgglomerative::NaiveAgglomerative(const EmbeddingMatrix& X, LinkageKind kind) : n_(X.n) {
    const std::vector<double> point_dist = point_distance_matrix(X);

    struct Cluster {
        std::vector<std::size_t> members;  // sorted
        std::vector<double> centroid;
        bool alive = true;
    };
    std::vector<Cluster> clusters(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        clusters[i].members = {i};
        clusters[i].centroid.assign(X.data.begin() + i * X.d, X.data.begin() + (i + 1) * X.d);
    }

    auto linkage_of = [&](const Cluster& a, const Cluster& b) {
        if (kind == LinkageKind::ward) {
            double sq = 0.0;
            for (std::size_t t = 0; t < X.d; ++t) {
                const double diff = a.centroid[t] - b.centroid[t];
                sq += diff * diff;
            }
            const double na = static_cast<double>(a.members.size());
            const double nb = static_cast<double>(b.members.size());
            return std::sqrt(2.0 * (na * nb / (na + nb)) * sq);
        }
        double acc = kind == LinkageKind::single ? std::numeric_limits<double>::infinity() : 0.0;
        for (std::size_t p : a.members)
            for (std::size_t q : b.members) {
                const double d = point_dist[p * n_ + q];
                if (kind == LinkageKind::single) acc = std::min(acc, d);
                else if (kind == LinkageKind::complete) acc = std::max(acc, d);
                else acc += d;
            }
        if (kind == LinkageKind::average)
            acc /= static_cast<double>(a.members.size() * b.members.size());
        return acc;
    };

    for (std::size_t step = 0; step + 1 < n_; ++step) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < clusters.size(); ++i) {
            if (!clusters[i].alive) continue;
            for (std::size_t j = i + 1; j < clusters.size(); ++j) {
                if (!clusters[j].alive) continue;
                const double d = linkage_of(clusters[i], clusters[j]);
                // Ties: smallest leading member, then smallest second member.
                if (d < best ||
                    (d == best && std::make_pair(clusters[i].members[0], clusters[j].members[0]) <
                                      std::make_pair(clusters[bi].members[0], clusters[bj].members[0]))) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        }
        heights_.push_back(best);
        merge_reps_.emplace_back(clusters[bi].members[0], clusters[bj].members[0]);

        Cluster merged;
        merged.members.resize(clusters[bi].members.size() + clusters[bj].members.size());
        std::merge(clusters[bi].members.begin(), clusters[bi].members.end(), clusters[bj].members.begin(),
                   clusters[bj].members.end(), merged.members.begin());
        merged.centroid.assign(X.d, 0.0);
        for (std::size_t p : merged.members)
            for (std::size_t t = 0; t < X.d; ++t) merged.centroid[t] += X.data[p * X.d + t];
        for (double& c : merged.centroid) c /= static_cast<double>(merged.members.size());
        clusters[bi].alive = false;
        clusters[bj].alive = false;
        clusters.push_back(std::move(merged));
    }
}

std::vector<std::int64_t> NaiveAgglomerative::labels_at(std::size_t k) const {
    return replay_labels(merge_reps_, n_, k);
}

MstReference::MstReference(const EmbeddingMatrix& X) : n_(X.n) {
    const std::vector<double> dist = point_distance_matrix(X);
    std::vector<char> in_tree(n_, 0);
    std::vector<double> best(n_, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> from(n_, 0);
    in_tree[0] = 1;
    for (std::size_t j = 1; j < n_; ++j) {
        best[j] = dist[j];
        from[j] = 0;
    }
    for (std::size_t added = 1; added < n_; ++added) {
        std::size_t next = n_;
        for (std::size_t j = 0; j < n_; ++j)
            if (!in_tree[j] && (next == n_ || best[j] < best[next])) next = j;
        in_tree[next] = 1;
        edges_.push_back({best[next], {from[next], next}});
        for (std::size_t j = 0; j < n_; ++j)
            if (!in_tree[j] && dist[next * n_ + j] < best[j]) {
                best[j] = dist[next * n_ + j];
                from[j] = next;
            }
    }
    std::sort(edges_.begin(), edges_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    sorted_heights.reserve(edges_.size());
    for (const auto& e : edges_) sorted_heights.push_back(e.first);
}

std::vector<std::int64_t> MstReference::labels_at(std::size_t k) const {
    std::vector<std::pair<std::size_t, std::size_t>> reps;
    reps.reserve(edges_.size());
    for (const auto& e : edges_) reps.push_back(e.second);
    return replay_labels(reps, n_, k);
}

double pair_counting_ari(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
    const std::size_t n = a.size();
    double same_same = 0, same_u = 0, same_v = 0;
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t t = s + 1; t < n; ++t) {
            const bool ua = a[s] == a[t];
            const bool vb = b[s] == b[t];
            if (ua && vb) ++same_same;
            if (ua) ++same_u;
            if (vb) ++same_v;
        }
    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    const double expected = same_u * same_v / pairs;
    const double max_index = 0.5 * (same_u + same_v);
    if (max_index == expected) return 1.0;
    return (same_same - expected) / (max_index - expected);
}

namespace {

// Probability of one table under the fixed-margins permutation model:
// prod(a_i!) prod(b_j!) / (N! prod(n_ij!)). Factorials are exact in double
// for the n <= 10 scale this oracle serves.
double factorial(std::int64_t v) {
    double f = 1.0;
    for (std::int64_t i = 2; i <= v; ++i) f *= static_cast<double>(i);
    return f;
}

double table_mi(const std::vector<std::int64_t>& cells, const std::vector<std::int64_t>& a,
                const std::vector<std::int64_t>& b, std::int64_t total) {
    const double n = static_cast<double>(total);
    double mi = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) {
            const std::int64_t c = cells[i * b.size() + j];
            if (c == 0) continue;
            mi += (static_cast<double>(c) / n) *
                  std::log(n * static_cast<double>(c) /
                           (static_cast<double>(a[i]) * static_cast<double>(b[j])));
        }
    return mi;
}

}  // namespace

double enumeration_emi(const std::vector<std::int64_t>& row_sums,
                       const std::vector<std::int64_t>& col_sums) {
    const std::size_t rows = row_sums.size();
    const std::size_t cols = col_sums.size();
    std::int64_t total = 0;
    for (std::int64_t v : row_sums) total += v;

    double base = 1.0 / factorial(total);
    for (std::int64_t v : row_sums) base *= factorial(v);
    for (std::int64_t v : col_sums) base *= factorial(v);

    std::vector<std::int64_t> cells(rows * cols, 0);
    std::vector<std::int64_t> col_left = col_sums;
    double emi = 0.0;

    // Fill cell by cell, row-major, tracking the remaining row/column budget.
    std::function<void(std::size_t, std::size_t, std::int64_t)> fill =
        [&](std::size_t i, std::size_t j, std::int64_t row_left) {
            if (i == rows) {
                double p = base;
                for (std::int64_t c : cells) p /= factorial(c);
                emi += p * table_mi(cells, row_sums, col_sums, total);
                return;
            }
            if (j == cols) {
                if (row_left == 0) fill(i + 1, 0, i + 1 < rows ? row_sums[i + 1] : 0);
                return;
            }
            if (j + 1 == cols) {
                // Last column is forced by the row budget.
                if (row_left <= col_left[j]) {
                    cells[i * cols + j] = row_left;
                    col_left[j] -= row_left;
                    fill(i, j + 1, 0);
                    col_left[j] += row_left;
                    cells[i * cols + j] = 0;
                }
                return;
            }
            const std::int64_t cap = std::min(row_left, col_left[j]);
            for (std::int64_t v = 0; v <= cap; ++v) {
                cells[i * cols + j] = v;
                col_left[j] -= v;
                fill(i, j + 1, row_left - v);
                col_left[j] += v;
                cells[i * cols + j] = 0;
            }
        };
    fill(0, 0, rows > 0 ? row_sums[0] : 0);
    return emi;
}

double enumeration_ami(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
    const std::size_t n = a.size();
    std::map<std::int64_t, std::int64_t> ua, ub;
    for (std::int64_t v : a) ++ua[v];
    for (std::int64_t v : b) ++ub[v];
    std::vector<std::int64_t> row_sums, col_sums;
    for (const auto& [id, c] : ua) row_sums.push_back(c);
    for (const auto& [id, c] : ub) col_sums.push_back(c);

    // Direct joint counts for MI.
    std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> joint;
    for (std::size_t i = 0; i < n; ++i) ++joint[{a[i], b[i]}];
    const double dn = static_cast<double>(n);
    double mi = 0.0;
    for (const auto& [key, c] : joint)
        mi += (static_cast<double>(c) / dn) *
              std::log(dn * static_cast<double>(c) /
                       (static_cast<double>(ua[key.first]) * static_cast<double>(ub[key.second])));

    double h_a = 0.0, h_b = 0.0;
    for (const auto& [id, c] : ua) h_a -= (c / dn) * std::log(c / dn);
    for (const auto& [id, c] : ub) h_b -= (c / dn) * std::log(c / dn);

    const double emi = enumeration_emi(row_sums, col_sums);
    const double denom = 0.5 * (h_a + h_b) - emi;
    if (std::abs(denom) < 1e-14) return std::abs(mi - emi) < 1e-14 ? 1.0 : 0.0;
    return (mi - emi) / denom;
}

double spearman(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    auto ranks = [n](std::span<const double> v) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> r(n);
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
            const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
            for (std::size_t t = i; t <= j; ++t) r[order[t]] = avg;
            i = j + 1;
        }
        return r;
    };
    const std::vector<double> rx = ranks(x);
    const std::vector<double> ry = ranks(y);
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double cov = 0, vx = 0, vy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        cov += (rx[i] - mx) * (ry[i] - my);
        vx += (rx[i] - mx) * (rx[i] - mx);
        vy += (ry[i] - my) * (ry[i] - my);
    }
    if (vx == 0 || vy == 0) return 0.0;
    return cov / std::sqrt(vx * vy);
}

}  // namespace oracles
