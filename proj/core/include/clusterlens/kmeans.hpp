#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "clusterlens/assignment.hpp"
#include "clusterlens/embedding.hpp"

namespace clusterlens {

struct KMeansResult {
    ClusterAssignment assignment;
    std::vector<double> centroids;        // k x d row-major, in final label order
    double objective = 0.0;               // sum of squared distances to assigned centroid
    std::size_t iterations = 0;
    std::vector<double> objective_trace;  // objective after each iteration, non-increasing
};

/// Lloyd iterations from a k-means++ start, driven entirely by the project's
/// deterministic generator: a fixed seed gives a bit-identical result.
/// Converges when no assignment changes or after max_iters. Empty clusters
/// are repaired by reseeding them to the point farthest from its assigned
/// centroid. Throws KOutOfRange unless 1 <= k <= n.
KMeansResult kmeans(const EmbeddingMatrix& X, std::size_t k, std::uint64_t seed,
                    std::size_t max_iters = 300);

}  // namespace clusterlens
