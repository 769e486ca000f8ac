#include "shdx/errors.hpp"

namespace shdx {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::dimension: return "dimension";
        case ErrorCode::step_too_large: return "step-too-large";
        case ErrorCode::extraction: return "extraction";
        case ErrorCode::non_symplectic_input: return "non-symplectic-input";
        case ErrorCode::refine_n: return "refine-N";
        case ErrorCode::floquet_mismatch: return "floquet-nullity-mismatch";
        case ErrorCode::probe_too_large: return "theta-probe-too-large";
        case ErrorCode::unresolved_degeneracy: return "unresolved-degeneracy";
        case ErrorCode::endpoint_degenerate: return "endpoint-degenerate";
        case ErrorCode::assembly: return "assembly";
        case ErrorCode::input: return "input";
        case ErrorCode::io: return "io";
    }
    return "unknown";
}

bool is_numerical(ErrorCode code) {
    switch (code) {
        case ErrorCode::refine_n:
        case ErrorCode::floquet_mismatch:
        case ErrorCode::probe_too_large:
        case ErrorCode::unresolved_degeneracy:
        case ErrorCode::endpoint_degenerate:
        case ErrorCode::assembly:
            return true;
        default:
            return false;
    }
}

}  // namespace shdx
