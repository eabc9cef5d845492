#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace clusterlens {

/// Value precision as declared in an EMB1 file header. Compute is always
/// 64-bit internally; this only controls the on-disk encoding.
enum class Dtype : std::uint8_t { f32 = 0, f64 = 1 };

/// Dense n x d row-major activation matrix for one layer of one run.
struct EmbeddingMatrix {
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<double> data;  // n*d values, row-major, all finite
    Dtype dtype = Dtype::f64;
    std::string layer_name;
    std::string run_id;

    std::span<const double> row(std::size_t i) const {
        return {data.data() + i * d, d};
    }
    std::span<double> row(std::size_t i) {
        return {data.data() + i * d, d};
    }
};

/// Reads an EMB1 file. Throws BadMagic, TruncatedFile or NonFiniteValue,
/// each carrying the byte offset of the problem. layer_name/run_id are left
/// empty; they are sidecar metadata, not part of the format.
EmbeddingMatrix load_embeddings(const std::string& path);

/// Writes an EMB1 file in the matrix's declared precision. Throws IoFailure.
/// load_embeddings(save_embeddings(x)) reproduces x's values bit-for-bit
/// provided the values are representable in the declared precision (always
/// true for matrices that came from a file).
void save_embeddings(const EmbeddingMatrix& matrix, const std::string& path);

struct L2NormalizeResult {
    EmbeddingMatrix matrix;
    std::size_t zero_rows = 0;  // rows left unchanged because their norm is 0
};

/// Scales every nonzero row to unit Euclidean norm. Zero rows are kept
/// unchanged and tallied rather than dropped, so row indices stay aligned
/// with the label table.
L2NormalizeResult l2_normalize(const EmbeddingMatrix& matrix);

}  // namespace clusterlens
