#pragma once

#include <stdexcept>
#include <string>

namespace tilekmc {

/// Error categories surfaced by the library. The C API maps these to
/// integer status codes; the C++ layer throws Error carrying one.
enum class Errc {
    site_occupied,
    site_empty,
    not_adjacent,
    unknown_label,
    non_positive_temperature,
    empty_input,
    zero_length,
    too_few_points,
    bad_k,
    degenerate_matrix,
    empty_range,
    no_empty_site,
    io_failure,
    bad_config,
    encoding_failure,
    invalid_argument,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
    throw Error(code, std::string(errc_name(code)) + ": " + message);
}

} // namespace tilekmc
