#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace clusterlens {

enum class errc {
    bad_magic,
    truncated_file,
    non_finite_value,
    io_failure,
    parse_error,
    duplicate_index,
    subclass_in_two_superclasses,
    missing_column,
    empty_input,
    k_out_of_range,
    length_mismatch,
    empty_table,
    too_few_samples,
    shape_mismatch,
    unknown_subclass,
    superclass_too_small,
    empty_dataset,
    no_shared_layers,
    single_class,
    dimension_mismatch,
    empty_series,
    bad_config,
};

const char* errc_name(errc code);

/// Exception carrying a stable error code plus, for file errors, the byte
/// offset where the problem was detected.
class error : public std::runtime_error {
public:
    static constexpr std::size_t no_offset = static_cast<std::size_t>(-1);

    error(errc code, const std::string& message, std::size_t byte_offset = no_offset)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message),
          code_(code),
          byte_offset_(byte_offset) {}

    errc code() const noexcept { return code_; }
    std::size_t byte_offset() const noexcept { return byte_offset_; }

private:
    errc code_;
    std::size_t byte_offset_;
};

}  // namespace clusterlens
