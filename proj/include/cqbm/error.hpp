#pragma once

#include <stdexcept>
#include <string>

namespace cqbm {

enum class ErrorCode {
    invalid_config,
    coupling_too_strong,
    unequal_damping,
    degenerate_modes,
    overdamped,
    non_real_ratio,
    caustic_time,
    quadrature_non_convergence,
    not_normalizable,
    non_hermitian_large,
    step_failure,
    io,
};

const char* error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace cqbm
