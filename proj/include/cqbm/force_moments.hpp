#pragma once

#include <array>

#include "cqbm/forcing.hpp"
#include "cqbm/modes.hpp"

namespace cqbm {

/// Mode-projected force integrals on [0, t]:
///   M[k] = int f1 exp(delta_k tau) sin(Omega_k tau),  N[k] = same with cos,
///   M2[k], N2[k] the same for f2.
struct ForceMoments {
    std::array<double, 2> M{}, N{}, M2{}, N2{};
    double lambda1 = 0.0, lambda2 = 0.0;  // coefficients of xi_i1, xi_i2
    std::array<double, 2> phi{};          // coefficients of xi_f1, xi_f2
};

ForceMoments force_moments(const NormalModes& modes, const ForceSpec& f1, const ForceSpec& f2, double t);

}  // namespace cqbm
