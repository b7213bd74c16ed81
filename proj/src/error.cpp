#include "cqbm/error.hpp"

namespace cqbm {

const char* error_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::invalid_config: return "InvalidConfig";
        case ErrorCode::coupling_too_strong: return "CouplingTooStrong";
        case ErrorCode::unequal_damping: return "UnequalDamping";
        case ErrorCode::degenerate_modes: return "DegenerateModes";
        case ErrorCode::overdamped: return "Overdamped";
        case ErrorCode::non_real_ratio: return "NonRealRatio";
        case ErrorCode::caustic_time: return "CausticTime";
        case ErrorCode::quadrature_non_convergence: return "QuadratureNonConvergence";
        case ErrorCode::not_normalizable: return "NotNormalizable";
        case ErrorCode::non_hermitian_large: return "NonHermitianLarge";
        case ErrorCode::step_failure: return "StepFailure";
        case ErrorCode::io: return "IOError";
    }
    return "Error";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

}  // namespace cqbm
