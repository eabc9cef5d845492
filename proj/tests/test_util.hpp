#pragma once

#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <string>

#include "clusterlens/embedding.hpp"
#include "clusterlens/labels.hpp"
#include "clusterlens/rng.hpp"

namespace testutil {

inline clusterlens::EmbeddingMatrix random_matrix(std::size_t n, std::size_t d, std::uint64_t seed,
                                                  double scale = 1.0) {
    clusterlens::EmbeddingMatrix m;
    m.n = n;
    m.d = d;
    m.dtype = clusterlens::Dtype::f64;
    m.data.resize(n * d);
    clusterlens::Rng rng(seed);
    for (double& v : m.data) v = scale * rng.next_gaussian();
    return m;
}

/// `blobs` well-separated Gaussian clusters (random centers ~100 sigma
/// apart, in distinct directions so unit-normalization keeps them apart),
/// `per_blob` points each. Returns the matrix plus the ground-truth blob of
/// each row.
struct BlobData {
    clusterlens::EmbeddingMatrix X;
    std::vector<clusterlens::ClassId> truth;
};

inline BlobData make_blobs(std::size_t blobs, std::size_t per_blob, std::size_t d, std::uint64_t seed,
                           double center_scale = 100.0, double sigma = 1.0) {
    BlobData out;
    out.X.n = blobs * per_blob;
    out.X.d = d;
    out.X.dtype = clusterlens::Dtype::f64;
    out.X.data.reserve(out.X.n * d);
    clusterlens::Rng rng(seed);
    for (std::size_t b = 0; b < blobs; ++b) {
        std::vector<double> center(d);
        for (double& c : center) c = center_scale * rng.next_gaussian();
        for (std::size_t p = 0; p < per_blob; ++p) {
            for (std::size_t t = 0; t < d; ++t)
                out.X.data.push_back(center[t] + sigma * rng.next_gaussian());
            out.truth.push_back(static_cast<clusterlens::ClassId>(b));
        }
    }
    return out;
}

/// Unique scratch directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        dir_ = std::filesystem::temp_directory_path() /
               ("clusterlens-test-" + tag + "-" + std::to_string(::getpid()));
        std::filesystem::create_directories(dir_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(dir_, ec);
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

private:
    std::filesystem::path dir_;
};

}  // namespace testutil
