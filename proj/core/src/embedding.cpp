#include "clusterlens/embedding.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "clusterlens/errors.hpp"

namespace clusterlens {

namespace {

constexpr char kMagic[4] = {'E', 'M', 'B', '1'};
constexpr std::size_t kHeaderSize = 24;

std::uint64_t read_u64_le(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

void write_u64_le(unsigned char* p, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) p[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
}

float f32_from_le(const unsigned char* p) {
    std::uint32_t bits = 0;
    for (int i = 3; i >= 0; --i) bits = (bits << 8) | p[i];
    return std::bit_cast<float>(bits);
}

double f64_from_le(const unsigned char* p) {
    return std::bit_cast<double>(read_u64_le(p));
}

}  // namespace

EmbeddingMatrix load_embeddings(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error(errc::io_failure, "cannot open '" + path + "' for reading");

    unsigned char header[kHeaderSize];
    in.read(reinterpret_cast<char*>(header), kHeaderSize);
    const auto got = static_cast<std::size_t>(in.gcount());
    if (got < 4 || std::memcmp(header, kMagic, 4) != 0)
        throw error(errc::bad_magic, "'" + path + "' does not start with EMB1 at byte offset 0", 0);
    if (got < kHeaderSize)
        throw error(errc::truncated_file, "'" + path + "' ends inside the header at byte offset " + std::to_string(got), got);

    const std::uint8_t dtype_code = header[4];
    if (dtype_code > 1)
        throw error(errc::parse_error, "'" + path + "' has unknown dtype code " + std::to_string(dtype_code) + " at byte offset 4", 4);

    EmbeddingMatrix m;
    m.dtype = static_cast<Dtype>(dtype_code);
    m.n = static_cast<std::size_t>(read_u64_le(header + 8));
    m.d = static_cast<std::size_t>(read_u64_le(header + 16));
    if (m.d < 1)
        throw error(errc::parse_error, "'" + path + "' declares d = 0 at byte offset 16", 16);
    if (m.n != 0 && m.n > std::numeric_limits<std::size_t>::max() / 8 / m.d)
        throw error(errc::parse_error,
                    "'" + path + "' header declares more values than addressable (n = " +
                        std::to_string(m.n) + ", d = " + std::to_string(m.d) + ")",
                    8);

    const std::size_t count = m.n * m.d;
    const std::size_t value_size = (m.dtype == Dtype::f32) ? 4 : 8;
    std::vector<unsigned char> raw(count * value_size);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    const auto payload = static_cast<std::size_t>(in.gcount());
    if (payload < raw.size()) {
        const std::size_t offset = kHeaderSize + payload;
        throw error(errc::truncated_file,
                    "'" + path + "' holds " + std::to_string(payload) + " payload bytes, expected " +
                        std::to_string(raw.size()) + "; truncated at byte offset " + std::to_string(offset),
                    offset);
    }

    m.data.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double v = (m.dtype == Dtype::f32) ? static_cast<double>(f32_from_le(raw.data() + i * 4))
                                                 : f64_from_le(raw.data() + i * 8);
        if (!std::isfinite(v)) {
            const std::size_t offset = kHeaderSize + i * value_size;
            throw error(errc::non_finite_value,
                        "'" + path + "' has a non-finite value at byte offset " + std::to_string(offset),
                        offset);
        }
        m.data[i] = v;
    }
    return m;
}

void save_embeddings(const EmbeddingMatrix& matrix, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw error(errc::io_failure, "cannot open '" + path + "' for writing");

    unsigned char header[kHeaderSize] = {};
    std::memcpy(header, kMagic, 4);
    header[4] = static_cast<unsigned char>(matrix.dtype);
    write_u64_le(header + 8, matrix.n);
    write_u64_le(header + 16, matrix.d);
    out.write(reinterpret_cast<const char*>(header), kHeaderSize);

    const std::size_t count = matrix.n * matrix.d;
    if (matrix.dtype == Dtype::f32) {
        std::vector<unsigned char> raw(count * 4);
        for (std::size_t i = 0; i < count; ++i) {
            const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(matrix.data[i]));
            for (int b = 0; b < 4; ++b)
                raw[i * 4 + b] = static_cast<unsigned char>((bits >> (8 * b)) & 0xff);
        }
        out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    } else {
        std::vector<unsigned char> raw(count * 8);
        for (std::size_t i = 0; i < count; ++i)
            write_u64_le(raw.data() + i * 8, std::bit_cast<std::uint64_t>(matrix.data[i]));
        out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    }
    if (!out) throw error(errc::io_failure, "write to '" + path + "' failed");
}

L2NormalizeResult l2_normalize(const EmbeddingMatrix& matrix) {
    L2NormalizeResult result;
    result.matrix = matrix;
    for (std::size_t i = 0; i < matrix.n; ++i) {
        auto row = result.matrix.row(i);
        double sq = 0.0;
        for (double v : row) sq += v * v;
        if (sq == 0.0) {
            ++result.zero_rows;
            continue;
        }
        const double inv = 1.0 / std::sqrt(sq);
        for (double& v : row) v *= inv;
    }
    return result;
}

}  // namespace clusterlens
