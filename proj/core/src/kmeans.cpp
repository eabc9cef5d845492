#include "clusterlens/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "clusterlens/errors.hpp"
#include "clusterlens/rng.hpp"

namespace clusterlens {

namespace {

double squared_distance(const double* a, const double* b, std::size_t d) {
    double acc = 0.0;
    for (std::size_t t = 0; t < d; ++t) {
        const double diff = a[t] - b[t];
        acc += diff * diff;
    }
    return acc;
}

// Assign each point to the nearest center (ties: lowest center id).
// Returns the objective under the given centers.
double assign_points(const EmbeddingMatrix& X, const std::vector<double>& centers, std::size_t k,
                     std::vector<std::int64_t>& labels) {
    double objective = 0.0;
    for (std::size_t i = 0; i < X.n; ++i) {
        const double* row = X.data.data() + i * X.d;
        double best = std::numeric_limits<double>::infinity();
        std::int64_t best_c = 0;
        for (std::size_t c = 0; c < k; ++c) {
            const double sq = squared_distance(row, centers.data() + c * X.d, X.d);
            if (sq < best) {
                best = sq;
                best_c = static_cast<std::int64_t>(c);
            }
        }
        labels[i] = best_c;
        objective += best;
    }
    return objective;
}

}  // namespace

KMeansResult kmeans(const EmbeddingMatrix& X, std::size_t k, std::uint64_t seed, std::size_t max_iters) {
    const std::size_t n = X.n;
    const std::size_t d = X.d;
    if (k < 1 || k > n)
        throw error(errc::k_out_of_range, "k = " + std::to_string(k) + " outside 1.." + std::to_string(n));

    Rng rng(seed);
    std::vector<double> centers(k * d);
    std::vector<char> is_center(n, 0);

    // k-means++ seeding: first center uniform, then D^2 sampling.
    {
        const std::size_t first = static_cast<std::size_t>(rng.next_below(n));
        std::copy_n(X.data.data() + first * d, d, centers.begin());
        is_center[first] = 1;

        std::vector<double> d2(n);
        for (std::size_t i = 0; i < n; ++i)
            d2[i] = squared_distance(X.data.data() + i * d, centers.data(), d);

        for (std::size_t c = 1; c < k; ++c) {
            double total = 0.0;
            for (double v : d2) total += v;
            std::size_t pick = n;
            if (total > 0.0) {
                const double r = rng.next_double() * total;
                double cum = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    cum += d2[i];
                    if (cum > r && d2[i] > 0.0) {
                        pick = i;
                        break;
                    }
                }
                if (pick == n) {
                    // Float round-off pushed r past the last mass; take the
                    // last point with positive weight.
                    for (std::size_t i = n; i-- > 0;)
                        if (d2[i] > 0.0) {
                            pick = i;
                            break;
                        }
                }
            }
            if (pick == n) {
                // All remaining points coincide with chosen centers; take the
                // lowest-index point not already a center.
                for (std::size_t i = 0; i < n; ++i)
                    if (!is_center[i]) {
                        pick = i;
                        break;
                    }
            }
            std::copy_n(X.data.data() + pick * d, d, centers.begin() + c * d);
            is_center[pick] = 1;
            for (std::size_t i = 0; i < n; ++i)
                d2[i] = std::min(d2[i], squared_distance(X.data.data() + i * d, centers.data() + c * d, d));
        }
    }

    KMeansResult result;
    std::vector<std::int64_t> labels(n);
    std::vector<std::int64_t> counts(k);

    auto repair_empty = [&]() {
        for (;;) {
            std::fill(counts.begin(), counts.end(), 0);
            for (std::int64_t l : labels) ++counts[static_cast<std::size_t>(l)];
            std::size_t empty = k;
            for (std::size_t c = 0; c < k; ++c)
                if (counts[c] == 0) {
                    empty = c;
                    break;
                }
            if (empty == k) return;
            // Reseed with the point farthest from its assigned centroid,
            // drawn from clusters that can spare a member (ties: lowest index).
            double worst = -1.0;
            std::size_t who = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const auto l = static_cast<std::size_t>(labels[i]);
                if (counts[l] < 2) continue;
                const double sq = squared_distance(X.data.data() + i * d, centers.data() + l * d, d);
                if (sq > worst) {
                    worst = sq;
                    who = i;
                }
            }
            std::copy_n(X.data.data() + who * d, d, centers.begin() + empty * d);
            labels[who] = static_cast<std::int64_t>(empty);
        }
    };

    double objective = assign_points(X, centers, k, labels);
    repair_empty();
    result.objective_trace.push_back(objective);

    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        // Centroid update.
        std::fill(centers.begin(), centers.end(), 0.0);
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto l = static_cast<std::size_t>(labels[i]);
            ++counts[l];
            const double* row = X.data.data() + i * d;
            double* ctr = centers.data() + l * d;
            for (std::size_t t = 0; t < d; ++t) ctr[t] += row[t];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) continue;
            const double inv = 1.0 / static_cast<double>(counts[c]);
            double* ctr = centers.data() + c * d;
            for (std::size_t t = 0; t < d; ++t) ctr[t] *= inv;
        }

        std::vector<std::int64_t> new_labels(n);
        objective = assign_points(X, centers, k, new_labels);
        const bool changed = new_labels != labels;
        labels = std::move(new_labels);
        repair_empty();
        ++result.iterations;
        result.objective_trace.push_back(objective);
        if (!changed) break;
    }

    // Canonical ids by first occurrence; reorder centroids to match.
    ClusterAssignment raw_assignment{std::move(labels), k};
    result.assignment = canonicalize(raw_assignment);
    result.centroids.assign(k * d, 0.0);
    std::vector<char> placed(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto from = static_cast<std::size_t>(raw_assignment.labels[i]);
        const auto to = static_cast<std::size_t>(result.assignment.labels[i]);
        if (!placed[to]) {
            std::copy_n(centers.begin() + from * d, d, result.centroids.begin() + to * d);
            placed[to] = 1;
        }
    }
    result.objective = result.objective_trace.back();
    return result;
}

}  // namespace clusterlens
