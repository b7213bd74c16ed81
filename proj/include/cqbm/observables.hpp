#pragma once

#include <Eigen/Dense>
#include <array>

#include "cqbm/reduction.hpp"

namespace cqbm {

/// Moments of the Hermitian state at one time. Covariances are central; sym_xp is
/// the symmetrized <x p + p x>/2 - <x><p>.
struct CovarianceReport {
    double t = 0.0;
    std::array<double, 2> x_mean{}, p_mean{};
    std::array<double, 2> var_x{}, var_p{}, sym_xp{};
    double cov_x1x2 = 0.0, cov_p1p2 = 0.0, cov_x1p2 = 0.0, cov_x2p1 = 0.0;
    std::array<double, 2> commutator_residual{};  // |<[x_k, p_k]> - i hbar| / hbar
    double herm_residual = 0.0;
    double hbar = 1.0;

    /// Symmetrized covariance over (x1, p1, x2, p2).
    Eigen::Matrix4d covariance_matrix() const;
    /// var_x var_p - sym_xp^2 - hbar^2 / 4 for oscillator k.
    double robertson_schrodinger(int k) const;
    /// Smallest eigenvalue of covariance + i hbar/2 J (non-negative for a physical state).
    double symplectic_margin() const;
};

CovarianceReport report(const GaussianStateParams& state, double t);

std::array<double, 2> normalized_means(const CovarianceReport& r, const InternalConfig& cfg);

}  // namespace cqbm
