// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace dsk {

enum class ErrorCode {
    invalid_dimension,
    shape_mismatch,
    zero_energy,
    infeasible_taps,
    list_length_mismatch,
    root_not_coprime,
    length_mismatch,
    out_of_scope_n,
    even_m0,
    too_many_users,
    overfull_grid,
    index_out_of_range,
    inconsistent_user_count,
    singular_system,
    zero_column,
    incompatible_config,
    wrong_detector,
    parse_error,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace dsk
