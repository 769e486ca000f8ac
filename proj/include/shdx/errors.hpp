#pragma once

#include <stdexcept>
#include <string>

namespace shdx {

enum class ErrorCode {
    dimension,
    step_too_large,
    extraction,
    non_symplectic_input,
    refine_n,
    floquet_mismatch,
    probe_too_large,
    unresolved_degeneracy,
    endpoint_degenerate,
    assembly,
    input,
    io,
};

const char* error_code_name(ErrorCode code);

// True for failures caused by numerical resolution rather than bad input.
bool is_numerical(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace shdx
