#pragma once

#include <array>
#include <complex>

#include "cqbm/units.hpp"

namespace cqbm {

using cplx = std::complex<double>;

struct QuarticCoefficients {
    double a = 0, b = 0, c = 0, d = 0;  // w^4 + i a w^3 + b w^2 + i c w + d
};

QuarticCoefficients quartic_coefficients(const InternalConfig& cfg);

/// D1(w) D2(w) - lambda^2 / (M1 M2), with Dk(w) = omega0k^2 - w^2 - 2 i gamma_k w.
cplx determinant(const InternalConfig& cfg, cplx omega);

struct NormalModes {
    /// w1, w4 = -/+ Omega1 - i delta1; w2, w3 = -/+ Omega2 - i delta2.
    std::array<cplx, 4> roots;
    std::array<double, 2> frequency{};  // Omega_k
    std::array<double, 2> decay{};      // delta_k
    /// r1 = X2/X1 in mode 1, r2 = X1/X2 in mode 2.
    std::array<double, 2> ratio{};
    double max_residual = 0.0;

    double coupling_factor() const { return 1.0 - ratio[0] * ratio[1]; }
};

/// Roots of the damped quartic for gamma1 == gamma2 (throws UnequalDamping otherwise).
NormalModes solve_determinant(const InternalConfig& cfg);

enum class Sector { damped, antidamped };

/// A two-component path value_k(tau) = Re sum_m amplitude[k][m] exp(exponent[m] tau).
struct ModalPath {
    std::array<cplx, 2> exponent{};
    std::array<std::array<cplx, 2>, 2> amplitude{};

    std::array<double, 2> value(double tau) const;
    std::array<double, 2> rate(double tau) const;
    std::array<double, 2> acceleration(double tau) const;
    /// Integral over [0, t] of value_k(tau) exp(i omega tau).
    std::array<cplx, 2> spectrum(double omega, double t) const;

    ModalPath& operator+=(const ModalPath& o);
    ModalPath scaled(double s) const;
};

struct Endpoints {
    std::array<double, 2> initial{};  // path at tau = 0
    std::array<double, 2> final{};    // path at tau = t
};

/// Homogeneous boundary-value path on [0, t]. The damped sector is the X system,
/// the anti-damped sector the homogeneous xi system. Throws CausticTime when sin(Omega_k t) ~ 0.
ModalPath homogeneous_path(const NormalModes& modes, Sector sector, const Endpoints& ends, double t);

std::array<double, 2> homogeneous_X_paths(const NormalModes& modes, const Endpoints& ends, double t, double tau);
std::array<double, 2> homogeneous_xi_paths(const NormalModes& modes, const Endpoints& ends,
                                           std::array<double, 2> partial, double t, double tau);

/// Throws CausticTime if |sin(Omega_k t)| < 1e-8 for either mode.
void check_caustic(const NormalModes& modes, double t);

/// (exp(z t) - 1) / z, stable for small |z t|.
cplx exp_integral(cplx z, double t);

}  // namespace cqbm
