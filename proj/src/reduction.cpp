#include "cqbm/reduction.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "cqbm/error.hpp"

namespace cqbm {
namespace {

constexpr cplx I{0.0, 1.0};

QuadraticExponent state_exponent(const GaussianStateParams& s) {
    QuadraticExponent e;
    e.variables = {"X_f1", "X_f2", "xi_f1", "xi_f2"};
    e.Q = Eigen::MatrixXcd::Zero(4, 4);
    e.L = Eigen::VectorXcd::Zero(4);
    e.Q(0, 0) = 2.0 * s.g1;
    e.Q(1, 1) = 2.0 * s.g2;
    e.Q(0, 1) = e.Q(1, 0) = s.g12;
    e.Q(2, 2) = 2.0 * s.gp1;
    e.Q(3, 3) = 2.0 * s.gp2;
    e.Q(2, 3) = e.Q(3, 2) = s.gp12;
    const double gpp[2][2] = {{s.gpp11, s.gpp12}, {s.gpp21, s.gpp22}};
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) e.Q(j, 2 + k) = e.Q(2 + k, j) = -I * gpp[j][k];
    e.L << -s.a_plus, -s.b_plus, I * s.A_minus, I * s.B_minus;
    e.c = std::log(s.norm);
    return e;
}

}  // namespace

int QuadraticExponent::index_of(const std::string& name) const {
    const auto it = std::find(variables.begin(), variables.end(), name);
    return it == variables.end() ? -1 : static_cast<int>(it - variables.begin());
}

cplx QuadraticExponent::value(const Eigen::VectorXd& v) const {
    const Eigen::VectorXcd z = v.cast<cplx>();
    return -0.5 * (z.transpose() * Q * z)(0, 0) + (L.transpose() * z)(0, 0) + c;
}

QuadraticExponent QuadraticExponent::integrate_out(std::span<const int> indices) const {
    const int n = static_cast<int>(variables.size());
    std::vector<int> S(indices.begin(), indices.end()), R;
    for (int i = 0; i < n; ++i)
        if (std::find(S.begin(), S.end(), i) == S.end()) R.push_back(i);
    const int ns = static_cast<int>(S.size()), nr = static_cast<int>(R.size());

    Eigen::MatrixXcd Qss(ns, ns), Qrs(nr, ns), Qrr(nr, nr);
    Eigen::VectorXcd Ls(ns), Lr(nr);
    for (int a = 0; a < ns; ++a) {
        Ls[a] = L[S[a]];
        for (int b = 0; b < ns; ++b) Qss(a, b) = Q(S[a], S[b]);
    }
    for (int a = 0; a < nr; ++a) {
        Lr[a] = L[R[a]];
        for (int b = 0; b < ns; ++b) Qrs(a, b) = Q(R[a], S[b]);
        for (int b = 0; b < nr; ++b) Qrr(a, b) = Q(R[a], R[b]);
    }

    // Diagonal equilibration: entries can span many orders of magnitude at long times.
    Eigen::VectorXd d(ns);
    for (int a = 0; a < ns; ++a) {
        const double m = std::abs(Qss(a, a));
        d[a] = m > 0.0 ? 1.0 / std::sqrt(m) : 1.0;
    }
    const Eigen::MatrixXcd scaled = d.asDiagonal() * Qss * d.asDiagonal();
    const Eigen::MatrixXd re = 0.5 * (scaled.real() + scaled.real().transpose());
    Eigen::LLT<Eigen::MatrixXd> llt(re);
    if (llt.info() != Eigen::Success || (llt.matrixL().toDenseMatrix().diagonal().array() <= 0.0).any())
        throw Error(ErrorCode::not_normalizable, "real part of the integrated block is not positive definite");

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(scaled);
    const Eigen::MatrixXcd Y = d.asDiagonal() * lu.solve(d.asDiagonal() * Qrs.transpose());
    const Eigen::VectorXcd y = d.asDiagonal() * lu.solve(d.asDiagonal() * Ls);

    QuadraticExponent out;
    for (int r : R) out.variables.push_back(variables[r]);
    out.Q = Qrr - Qrs * Y;
    out.Q = 0.5 * (out.Q + out.Q.transpose()).eval();
    out.L = Lr - Qrs * y;
    cplx logdet = 0.0;
    const Eigen::MatrixXcd U = lu.matrixLU();
    for (int a = 0; a < ns; ++a) logdet += std::log(U(a, a)) - 2.0 * std::log(d[a]);
    out.c = c + 0.5 * (Ls.transpose() * y)(0, 0) + 0.5 * ns * std::log(2.0 * std::numbers::pi) - 0.5 * logdet;
    return out;
}

QuadraticExponent propagator_exponent(const ActionForm& action, const InfluenceForm& influence, double hbar) {
    QuadraticExponent e;
    e.variables = {"X_f1", "X_f2", "X_i1", "X_i2", "xi_f1", "xi_f2", "xi_i1", "xi_i2"};
    e.Q = Eigen::MatrixXcd::Zero(8, 8);
    e.L = Eigen::VectorXcd::Zero(8);
    for (int j = 0; j < 4; ++j) {
        for (int k = 0; k < 4; ++k) {
            e.Q(j, 4 + k) = e.Q(4 + k, j) = -I * action.bilinear(j, k) / hbar;
            e.Q(4 + j, 4 + k) = 2.0 * influence.quadratic(j, k);
        }
        e.L[j] = I * action.linear_X[j] / hbar;
        e.L[4 + j] = I * action.linear_xi[j] / hbar;
    }
    e.c = I * action.constant / hbar;
    return e;
}

GaussianStateParams reduce_to_state(const QuadraticExponent& prop, double s1, double s2, double hbar) {
    QuadraticExponent e = prop;
    const double sigma[2] = {s1, s2};
    for (int k = 0; k < 2; ++k) {
        const int xi = e.index_of(k == 0 ? "X_i1" : "X_i2");
        const int yi = e.index_of(k == 0 ? "xi_i1" : "xi_i2");
        e.Q(xi, xi) += 1.0 / (4.0 * sigma[k]);
        e.Q(yi, yi) += 1.0 / (4.0 * sigma[k]);
        e.c -= 0.5 * std::log(2.0 * std::numbers::pi * sigma[k]);
    }
    const int initial[4] = {e.index_of("X_i1"), e.index_of("X_i2"), e.index_of("xi_i1"), e.index_of("xi_i2")};
    const QuadraticExponent r = e.integrate_out(initial);
    const auto& Q = r.Q;
    const auto& L = r.L;

    GaussianStateParams s;
    s.hbar = hbar;
    s.g1 = 0.5 * Q(0, 0).real();
    s.g12 = Q(0, 1).real();
    s.g2 = 0.5 * Q(1, 1).real();
    s.gp1 = 0.5 * Q(2, 2).real();
    s.gp12 = Q(2, 3).real();
    s.gp2 = 0.5 * Q(3, 3).real();
    s.gpp11 = -Q(0, 2).imag();
    s.gpp12 = -Q(0, 3).imag();
    s.gpp21 = -Q(1, 2).imag();
    s.gpp22 = -Q(1, 3).imag();
    s.a_plus = -L[0].real();
    s.b_plus = -L[1].real();
    s.A_minus = L[2].imag();
    s.B_minus = L[3].imag();
    s.A_plus = L[0].imag();
    s.B_plus = L[1].imag();
    s.a_minus = -L[2].real();
    s.b_minus = -L[3].real();

    double residue = 0.0;
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) {
            const double scale = std::sqrt(std::abs(Q(j, j)) * std::abs(Q(k, k)));
            const bool cross = (j < 2) != (k < 2);
            const double bad = cross ? std::abs(Q(j, k).real()) : std::abs(Q(j, k).imag());
            if (scale > 0.0) residue = std::max(residue, bad / scale);
        }
    s.imag_residue = residue;

    if (!(s.beta11() > 0.0) || !(s.det() > 0.0))
        throw Error(ErrorCode::not_normalizable, "position precision matrix is not positive definite");

    // Dimensionless size of each linear term over the state's own width.
    const double wx1 = 1.0 / std::sqrt(std::max(s.g1, 1e-300)), wx2 = 1.0 / std::sqrt(std::max(s.g2, 1e-300));
    const double wy1 = 1.0 / std::sqrt(std::max(s.gp1, 1e-300)), wy2 = 1.0 / std::sqrt(std::max(s.gp2, 1e-300));
    const std::pair<double, double> pairs[4] = {{std::abs(s.A_plus) * wx1, std::abs(s.A_minus) * wy1},
                                                {std::abs(s.B_plus) * wx2, std::abs(s.B_minus) * wy2},
                                                {std::abs(s.a_minus) * wy1, std::abs(s.a_plus) * wx1},
                                                {std::abs(s.b_minus) * wy2, std::abs(s.b_plus) * wx2}};
    for (auto [dropped, kept] : pairs)
        if (dropped > 1e-6 * kept + 1e-9)
            throw Error(ErrorCode::non_hermitian_large, "dropped non-Hermitian terms are not negligible");

    const double det = s.det();
    const double quad = s.a_plus * s.a_plus * s.beta22() - 2.0 * s.a_plus * s.b_plus * s.beta12() +
                        s.b_plus * s.b_plus * s.beta11();
    s.norm = std::sqrt(det) / (2.0 * std::numbers::pi) * std::exp(-2.0 * quad / det);

    s.full = r;
    s.full.c = std::log(s.norm);
    return s;
}

GaussianStateParams initial_state(double s1, double s2, double hbar) {
    GaussianStateParams s;
    s.hbar = hbar;
    s.g1 = s.gp1 = 1.0 / (8.0 * s1);
    s.g2 = s.gp2 = 1.0 / (8.0 * s2);
    s.norm = 1.0 / (2.0 * std::numbers::pi * std::sqrt(s1 * s2));
    s.full = state_exponent(s);
    return s;
}

cplx GaussianStateParams::density(double x1, double x2, double y1, double y2) const {
    const double X1 = x1 + y1, X2 = x2 + y2, u1 = x1 - y1, u2 = x2 - y2;
    const double re = -g1 * X1 * X1 - g12 * X1 * X2 - g2 * X2 * X2 - gp1 * u1 * u1 - gp12 * u1 * u2 - gp2 * u2 * u2 -
                      a_plus * X1 - b_plus * X2;
    const double im = gpp11 * X1 * u1 + gpp12 * X1 * u2 + gpp21 * X2 * u1 + gpp22 * X2 * u2 + A_minus * u1 + B_minus * u2;
    return norm * std::exp(cplx(re, im));
}

cplx GaussianStateParams::full_density(double x1, double x2, double y1, double y2) const {
    Eigen::VectorXd v(4);
    v << x1 + y1, x2 + y2, x1 - y1, x2 - y2;
    return std::exp(full.value(v));
}

double hermiticity_residual(const GaussianStateParams& s, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const double det = s.det();
    const double w1 = 3.0 * std::sqrt(s.beta22() / det), w2 = 3.0 * std::sqrt(s.beta11() / det);
    const double c1 = -2.0 * (s.a_plus * s.beta22() - s.b_plus * s.beta12()) / det;
    const double c2 = -2.0 * (s.b_plus * s.beta11() - s.a_plus * s.beta12()) / det;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0, peak = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double x1 = c1 + w1 * u(rng), x2 = c2 + w2 * u(rng);
        const double y1 = c1 + w1 * u(rng), y2 = c2 + w2 * u(rng);
        const cplx a = s.full_density(x1, x2, y1, y2);
        const cplx b = s.full_density(y1, y2, x1, x2);
        worst = std::max(worst, std::abs(a - std::conj(b)));
        peak = std::max({peak, std::abs(a), std::abs(b)});
    }
    return peak > 0.0 ? worst / peak : 0.0;
}

}  // namespace cqbm
