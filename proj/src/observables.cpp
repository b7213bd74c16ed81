#include "cqbm/observables.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace cqbm {

CovarianceReport report(const GaussianStateParams& s, double t) {
    CovarianceReport r;
    r.t = t;
    r.hbar = s.hbar;
    const double hb = s.hbar;
    const double b11 = s.beta11(), b12 = s.beta12(), b22 = s.beta22(), det = s.det();
    const double a = s.a_plus, b = s.b_plus;

    r.x_mean = {2.0 * (b * b12 - a * b22) / det, 2.0 * (a * b12 - b * b11) / det};
    // Position covariance is the inverse of the position precision matrix.
    const double S11 = b22 / det, S12 = -b12 / det, S22 = b11 / det;
    r.var_x = {S11, S22};
    r.cov_x1x2 = S12;

    // Momentum k acts as hbar * u_k with u_k = sum_j 2 g''_jk x_j + (A, B)_k on the diagonal.
    const double h1[2] = {s.gpp11, s.gpp21};
    const double h2[2] = {s.gpp12, s.gpp22};
    r.p_mean = {hb * (2.0 * (h1[0] * r.x_mean[0] + h1[1] * r.x_mean[1]) + s.A_minus),
                hb * (2.0 * (h2[0] * r.x_mean[0] + h2[1] * r.x_mean[1]) + s.B_minus)};
    auto quad = [&](const double* u, const double* v) {
        return u[0] * (S11 * v[0] + S12 * v[1]) + u[1] * (S12 * v[0] + S22 * v[1]);
    };
    r.var_p = {hb * hb * (4.0 * quad(h1, h1) + 2.0 * s.gp1), hb * hb * (4.0 * quad(h2, h2) + 2.0 * s.gp2)};
    r.cov_p1p2 = hb * hb * (4.0 * quad(h1, h2) + s.gp12);
    r.sym_xp = {2.0 * hb * (S11 * h1[0] + S12 * h1[1]), 2.0 * hb * (S12 * h2[0] + S22 * h2[1])};
    r.cov_x1p2 = 2.0 * hb * (S11 * h2[0] + S12 * h2[1]);
    r.cov_x2p1 = 2.0 * hb * (S12 * h1[0] + S22 * h1[1]);

    // <x p - p x> = i hbar Tr(rho); the trace of the normalized Gaussian.
    const double quadform = (a * a * b22 - 2.0 * a * b * b12 + b * b * b11) / det;
    const double trace = s.norm * 2.0 * M_PI / std::sqrt(det) * std::exp(2.0 * quadform);
    r.commutator_residual = {std::abs(trace - 1.0), std::abs(trace - 1.0)};
    r.herm_residual = 0.0;
    return r;
}

Eigen::Matrix4d CovarianceReport::covariance_matrix() const {
    Eigen::Matrix4d V;
    V << var_x[0], sym_xp[0], cov_x1x2, cov_x1p2,
         sym_xp[0], var_p[0], cov_x2p1, cov_p1p2,
         cov_x1x2, cov_x2p1, var_x[1], sym_xp[1],
         cov_x1p2, cov_p1p2, sym_xp[1], var_p[1];
    return V;
}

double CovarianceReport::robertson_schrodinger(int k) const {
    return var_x[k] * var_p[k] - sym_xp[k] * sym_xp[k] - 0.25 * hbar * hbar;
}

double CovarianceReport::symplectic_margin() const {
    Eigen::Matrix4cd H = covariance_matrix().cast<std::complex<double>>();
    const std::complex<double> h(0.0, 0.5 * hbar);
    H(0, 1) += h;
    H(1, 0) -= h;
    H(2, 3) += h;
    H(3, 2) -= h;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(H, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

std::array<double, 2> normalized_means(const CovarianceReport& r, const InternalConfig& cfg) {
    return {r.x_mean[0] / std::sqrt(cfg.osc[0].sigma0_sq), r.x_mean[1] / std::sqrt(cfg.osc[1].sigma0_sq)};
}

}  // namespace cqbm
