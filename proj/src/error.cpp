// SPDX-License-Identifier: Apache-2.0
#include "dsk/error.hpp"

namespace dsk {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::invalid_dimension: return "invalid-dimension";
        case ErrorCode::shape_mismatch: return "shape-mismatch";
        case ErrorCode::zero_energy: return "zero-energy";
        case ErrorCode::infeasible_taps: return "infeasible-taps";
        case ErrorCode::list_length_mismatch: return "list-length-mismatch";
        case ErrorCode::root_not_coprime: return "root-not-coprime";
        case ErrorCode::length_mismatch: return "length-mismatch";
        case ErrorCode::out_of_scope_n: return "out-of-scope-N";
        case ErrorCode::even_m0: return "even-m0";
        case ErrorCode::too_many_users: return "too-many-users";
        case ErrorCode::overfull_grid: return "overfull-grid";
        case ErrorCode::index_out_of_range: return "index-out-of-range";
        case ErrorCode::inconsistent_user_count: return "inconsistent-user-count";
        case ErrorCode::singular_system: return "singular-system";
        case ErrorCode::zero_column: return "zero-column";
        case ErrorCode::incompatible_config: return "incompatible-config";
        case ErrorCode::wrong_detector: return "wrong-detector";
        case ErrorCode::parse_error: return "parse-error";
    }
    return "unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace dsk
