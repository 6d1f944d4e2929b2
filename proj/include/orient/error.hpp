#pragma once

#include <stdexcept>
#include <string>

namespace orient {

enum class errc {
    io,
    malformed_input,
    duplicate_token,
    invalid_token,
    dim_mismatch,
    empty_intersection,
    out_of_range,
    zero_norm,
    zero_weights,
    empty_evaluation,
    usage,
    // numeric failures (CLI exit 3, everything above exits 2)
    ill_conditioned,
    singular_matrix,
};

constexpr bool is_numeric_failure(errc c) {
    return c == errc::ill_conditioned || c == errc::singular_matrix;
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& msg) {
    throw error(code, msg);
}

}  // namespace orient
