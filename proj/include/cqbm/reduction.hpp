#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cqbm/action.hpp"
#include "cqbm/influence.hpp"

namespace cqbm {

/// exp(-1/2 v^T Q v + L^T v + c) over named variables.
struct QuadraticExponent {
    std::vector<std::string> variables;
    Eigen::MatrixXcd Q;
    Eigen::VectorXcd L;
    cplx c = 0.0;

    int index_of(const std::string& name) const;
    cplx value(const Eigen::VectorXd& v) const;
    /// Gaussian integral over the listed variables (each over the real line).
    /// Throws NotNormalizable unless Re Q on that block is positive definite.
    QuadraticExponent integrate_out(std::span<const int> indices) const;
};

/// Variables (X_f1, X_f2, X_i1, X_i2, xi_f1, xi_f2, xi_i1, xi_i2);
/// exponent (i/hbar) S_cl - phi, without the prefactor.
QuadraticExponent propagator_exponent(const ActionForm& action, const InfluenceForm& influence, double hbar);

/// Hermitian density-matrix coefficients in sum/difference variables X = x + y, xi = x - y:
///   rho = C exp(-g1 X1^2 - g12 X1 X2 - g2 X2^2 - g'1 xi1^2 - g'12 xi1 xi2 - g'2 xi2^2
///               + i sum_jk g''_jk X_j xi_k - a X1 - b X2 + i A xi1 + i B xi2).
struct GaussianStateParams {
    double hbar = 1.0;
    double g1 = 0, g12 = 0, g2 = 0;
    double gp1 = 0, gp12 = 0, gp2 = 0;
    double gpp11 = 0, gpp21 = 0, gpp12 = 0, gpp22 = 0;  // gpp_jk multiplies X_j xi_k
    double a_plus = 0, b_plus = 0, A_minus = 0, B_minus = 0;
    double norm = 0;  // C(t)

    // Dropped non-Hermitian linear parts: -a^- xi1 - b^- xi2 + i A^+ X1 + i B^+ X2.
    double a_minus = 0, b_minus = 0, A_plus = 0, B_plus = 0;
    double imag_residue = 0;  // largest imaginary part left on a real coefficient, relative

    /// Exponent before truncation, over (X_f1, X_f2, xi_f1, xi_f2), normalized with C(t).
    QuadraticExponent full;

    double beta11() const { return 8.0 * g1; }
    double beta12() const { return 4.0 * g12; }
    double beta22() const { return 8.0 * g2; }
    double det() const { return beta11() * beta22() - beta12() * beta12(); }

    cplx density(double x1, double x2, double y1, double y2) const;
    cplx full_density(double x1, double x2, double y1, double y2) const;
};

GaussianStateParams reduce_to_state(const QuadraticExponent& propagator, double sigma1_sq, double sigma2_sq,
                                    double hbar);

/// The product of the two initial Gaussian packets in the same parameterization.
GaussianStateParams initial_state(double sigma1_sq, double sigma2_sq, double hbar);

/// Max over random points of |rho(x, y) - conj rho(y, x)| / max |rho|, for the untruncated state.
double hermiticity_residual(const GaussianStateParams& s, int samples = 100, std::uint64_t seed = 20240611);

}  // namespace cqbm
