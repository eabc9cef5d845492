#include <doctest.h>

#include <cmath>
#include <set>

#include "clusterlens/errors.hpp"
#include "clusterlens/kmeans.hpp"
#include "clusterlens/metrics.hpp"
#include "test_util.hpp"

using namespace clusterlens;

TEST_CASE("k = 1 puts everything in one cluster with the mean centroid") {
    const EmbeddingMatrix m = testutil::random_matrix(30, 3, 4);
    const KMeansResult result = kmeans(m, 1, 0);
    CHECK(result.assignment.k == 1);
    for (auto l : result.assignment.labels) CHECK(l == 0);
    for (std::size_t t = 0; t < m.d; ++t) {
        double mean = 0.0;
        for (std::size_t i = 0; i < m.n; ++i) mean += m.data[i * m.d + t];
        mean /= static_cast<double>(m.n);
        CHECK(result.centroids[t] == doctest::Approx(mean).epsilon(1e-12));
    }
}

TEST_CASE("k = n on distinct points reaches objective 0") {
    const EmbeddingMatrix m = testutil::random_matrix(12, 2, 8);
    const KMeansResult result = kmeans(m, 12, 3);
    CHECK(result.assignment.k == 12);
    CHECK(result.objective == 0.0);
    std::set<std::int64_t> used(result.assignment.labels.begin(), result.assignment.labels.end());
    CHECK(used.size() == 12);
}

TEST_CASE("separated blobs are recovered for several seeds") {
    const auto blobs = testutil::make_blobs(2, 30, 4, 15);
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const KMeansResult result = kmeans(blobs.X, 2, seed);
        CHECK(ari(result.assignment, canonicalize({blobs.truth, 2})) == 1.0);
    }
}

TEST_CASE("fixed seed gives a bit-identical result") {
    const EmbeddingMatrix m = testutil::random_matrix(50, 4, 21);
    const KMeansResult a = kmeans(m, 5, 77);
    const KMeansResult b = kmeans(m, 5, 77);
    CHECK(a.assignment == b.assignment);
    CHECK(a.centroids == b.centroids);
    CHECK(a.objective == b.objective);
}

TEST_CASE("objective is non-increasing across iterations") {
    const EmbeddingMatrix m = testutil::random_matrix(120, 6, 33);
    const KMeansResult result = kmeans(m, 7, 5);
    REQUIRE(result.objective_trace.size() >= 2);
    for (std::size_t i = 1; i < result.objective_trace.size(); ++i)
        CHECK(result.objective_trace[i] <= result.objective_trace[i - 1] + 1e-9);
}

TEST_CASE("k out of range is rejected") {
    const EmbeddingMatrix m = testutil::random_matrix(5, 2, 1);
    CHECK_THROWS_AS(kmeans(m, 0, 0), error);
    CHECK_THROWS_AS(kmeans(m, 6, 0), error);
}

TEST_CASE("duplicate points still yield k non-empty clusters") {
    EmbeddingMatrix m;
    m.n = 6;
    m.d = 1;
    m.data = {2.0, 2.0, 2.0, 2.0, 2.0, 2.0};
    const KMeansResult result = kmeans(m, 3, 9);
    CHECK(result.assignment.k == 3);
    std::set<std::int64_t> used(result.assignment.labels.begin(), result.assignment.labels.end());
    CHECK(used.size() == 3);
    CHECK(result.objective == 0.0);
}

TEST_CASE("every cluster id is used on random inputs") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const EmbeddingMatrix m = testutil::random_matrix(40, 3, 100 + seed);
        const std::size_t k = 1 + seed * 7 % 12;
        const KMeansResult result = kmeans(m, k, seed);
        std::set<std::int64_t> used(result.assignment.labels.begin(), result.assignment.labels.end());
        CHECK(used.size() == k);
        for (auto l : result.assignment.labels) {
            CHECK(l >= 0);
            CHECK(static_cast<std::size_t>(l) < k);
        }
    }
}
