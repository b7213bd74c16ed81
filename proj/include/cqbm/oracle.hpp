#pragma once

#include <Eigen/Core>
#include <array>
#include <functional>
#include <span>
#include <vector>

#include "cqbm/units.hpp"

// Verification engines built on the core layer only.
namespace cqbm::oracle {

/// (x1, v1, x2, v2)
using OdeState = std::array<double, 4>;

struct MeanTrajectory {
    std::vector<double> t;
    std::vector<std::array<double, 2>> x, p;
};

/// Ehrenfest equations x_k'' + 2 gamma_k x_k' + omega0k^2 x_k = (lambda x_other + f_k) / M_k
/// from rest, dopri5 at tolerance tol. Times must be ascending and >= 0.
MeanTrajectory mean_ode(const InternalConfig& cfg, std::span<const double> times, double tol = 1e-10);

/// Susceptibility chi(w) = D(w)^-1, D = [[M1 (w01^2 - w^2 - 2 i g1 w), -lambda], [-lambda, ...]].
Eigen::Matrix2cd susceptibility(const InternalConfig& cfg, double omega);

/// Stationary position covariance (hbar/pi) int_0^cutoff chi diag(2 M_k gamma_k w coth_k) chi^H dw.
/// With equal temperatures this is (hbar/pi) int coth Im chi.
Eigen::Matrix2d stationary_covariance(const InternalConfig& cfg);

/// (var_x1, var_x2, cov_x1x2) at equal temperatures (bath 1's temperature is used for both).
std::array<double, 3> fdt_stationary_variance(const InternalConfig& cfg);

/// K(s) = (2 M gamma / hbar pi) int_0^cutoff w coth(hbar w / 2 k_B T) cos(w s) dw by fixed panels.
double noise_kernel(double mass, double gamma, double thermal_energy, double cutoff, double s, double hbar = 1.0);

/// int_0^t dtau int_0^tau ds a(tau) K(tau - s) b(s), nested n-point Gauss-Legendre.
double brute_double_integral(const std::function<double(double)>& a, const std::function<double(double)>& kernel,
                             const std::function<double(double)>& b, double t, int n);

/// Symmetric matrix of the nested integral over all path pairs, sharing one kernel evaluation.
/// Entry (k, l) is the average of the (k, l) and (l, k) orderings.
Eigen::MatrixXd brute_quadratic_form(const std::vector<std::function<double(double)>>& paths,
                                     const std::function<double(double)>& kernel, double t, int n);

}  // namespace cqbm::oracle
