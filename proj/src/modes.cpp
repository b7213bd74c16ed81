#include "cqbm/modes.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "cqbm/error.hpp"

namespace cqbm {
namespace {

constexpr cplx I{0.0, 1.0};

cplx quartic(const QuarticCoefficients& q, cplx w) {
    return (((w + I * q.a) * w + q.b) * w + I * q.c) * w + q.d;
}

cplx quartic_slope(const QuarticCoefficients& q, cplx w) {
    return ((4.0 * w + 3.0 * I * q.a) * w + 2.0 * q.b) * w + I * q.c;
}

}  // namespace

QuarticCoefficients quartic_coefficients(const InternalConfig& cfg) {
    const auto& o1 = cfg.osc[0];
    const auto& o2 = cfg.osc[1];
    const double w1 = o1.omega0 * o1.omega0, w2 = o2.omega0 * o2.omega0;
    QuarticCoefficients q;
    q.a = 2.0 * (o1.gamma + o2.gamma);
    q.b = -(w1 + w2 + 4.0 * o1.gamma * o2.gamma);
    q.c = -2.0 * (o2.gamma * w1 + o1.gamma * w2);
    q.d = w1 * w2 - cfg.coupling * cfg.coupling / (o1.mass * o2.mass);
    return q;
}

cplx determinant(const InternalConfig& cfg, cplx w) {
    const auto& o1 = cfg.osc[0];
    const auto& o2 = cfg.osc[1];
    const cplx d1 = o1.omega0 * o1.omega0 - w * w - 2.0 * I * o1.gamma * w;
    const cplx d2 = o2.omega0 * o2.omega0 - w * w - 2.0 * I * o2.gamma * w;
    return d1 * d2 - cfg.coupling * cfg.coupling / (o1.mass * o2.mass);
}

NormalModes solve_determinant(const InternalConfig& cfg) {
    const auto& o1 = cfg.osc[0];
    const auto& o2 = cfg.osc[1];
    const double gamma = o1.gamma;
    if (std::abs(o1.gamma - o2.gamma) > 1e-14 * std::max(o1.gamma, o2.gamma))
        throw Error(ErrorCode::unequal_damping, "the path-integral engine requires equal damping rates");

    const QuarticCoefficients q = quartic_coefficients(cfg);
    Eigen::Matrix4cd companion = Eigen::Matrix4cd::Zero();
    companion(0, 0) = -I * q.a;
    companion(0, 1) = -q.b;
    companion(0, 2) = -I * q.c;
    companion(0, 3) = -q.d;
    companion(1, 0) = companion(2, 1) = companion(3, 2) = 1.0;
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(companion, false);
    std::array<cplx, 4> raw;
    for (int j = 0; j < 4; ++j) {
        cplx w = es.eigenvalues()[j];
        for (int it = 0; it < 3; ++it) {
            const cplx slope = quartic_slope(q, w);
            if (std::abs(slope) == 0.0) break;
            w -= quartic(q, w) / slope;
        }
        raw[j] = w;
    }

    // Label by the mass-weighted eigenvectors: mode 1 is the one continuous with omega01.
    const double A = o1.omega0 * o1.omega0 - gamma * gamma;
    const double B = o2.omega0 * o2.omega0 - gamma * gamma;
    Eigen::Matrix2d S;
    S << A, -cfg.coupling / std::sqrt(o1.mass * o2.mass), -cfg.coupling / std::sqrt(o1.mass * o2.mass), B;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> sym(S);
    const auto& vec = sym.eigenvectors();
    const int first = std::abs(vec(0, 0)) >= std::abs(vec(0, 1)) ? 0 : 1;
    std::array<double, 2> mu{sym.eigenvalues()[first], sym.eigenvalues()[1 - first]};
    if (mu[0] <= 0.0 || mu[1] <= 0.0)
        throw Error(ErrorCode::overdamped, "a normal mode is overdamped");

    std::sort(raw.begin(), raw.end(), [](cplx x, cplx y) { return x.real() < y.real(); });
    // raw[2], raw[3] have positive real part.
    std::array<cplx, 2> positive{raw[2], raw[3]};
    std::array<cplx, 2> negative{raw[1], raw[0]};
    auto closeness = [&](cplx w, double m) { return std::abs(w.real() * w.real() - m); };
    if (closeness(positive[0], mu[0]) > closeness(positive[1], mu[0])) {
        std::swap(positive[0], positive[1]);
        std::swap(negative[0], negative[1]);
    }
    // Pair each negative root with its mirror.
    if (std::abs(negative[0] + std::conj(positive[0])) > std::abs(negative[1] + std::conj(positive[0])))
        std::swap(negative[0], negative[1]);

    NormalModes m;
    m.roots = {negative[0], negative[1], positive[1], positive[0]};
    for (int k = 0; k < 2; ++k) {
        m.frequency[k] = positive[k].real();
        m.decay[k] = -positive[k].imag();
    }
    const double scale = std::max(m.frequency[0], m.frequency[1]);
    if (std::abs(m.frequency[0] - m.frequency[1]) < 1e-8 * scale)
        throw Error(ErrorCode::degenerate_modes, "mode frequencies coincide");

    m.max_residual = 0.0;
    for (const cplx& w : m.roots) m.max_residual = std::max(m.max_residual, std::abs(determinant(cfg, w)));

    // Ratios from the line whose factor stays finite as the coupling vanishes; s = -i w.
    const double lambda = cfg.coupling;
    if (lambda == 0.0) {
        m.ratio = {0.0, 0.0};
    } else {
        const cplx s1 = -I * positive[0];
        const cplx s2 = -I * positive[1];
        const cplx r1 = lambda / (o2.mass * (o2.omega0 * o2.omega0 + s1 * s1 + 2.0 * gamma * s1));
        const cplx r2 = lambda / (o1.mass * (o1.omega0 * o1.omega0 + s2 * s2 + 2.0 * gamma * s2));
        for (auto [k, r] : {std::pair{0, r1}, std::pair{1, r2}}) {
            if (std::abs(r.imag()) > 1e-8 * std::max(std::abs(r), 1.0))
                throw Error(ErrorCode::non_real_ratio, "mode ratio r" + std::to_string(k + 1) + " is not real");
            m.ratio[k] = r.real();
        }
    }
    if (std::abs(m.coupling_factor()) < 1e-12)
        throw Error(ErrorCode::degenerate_modes, "1 - r1 r2 vanishes");
    return m;
}

cplx exp_integral(cplx z, double t) {
    const cplx w = z * t;
    if (std::abs(w) < 0.5) {
        cplx term = 1.0, sum = 1.0;
        for (int k = 1; k < 25; ++k) {
            term *= w / double(k + 1);
            sum += term;
        }
        return t * sum;
    }
    const double s = std::sin(0.5 * w.imag());
    const cplx em1{std::expm1(w.real()) * std::cos(w.imag()) - 2.0 * s * s, std::exp(w.real()) * std::sin(w.imag())};
    return em1 / z;
}

std::array<double, 2> ModalPath::value(double tau) const {
    std::array<double, 2> out{};
    for (int m = 0; m < 2; ++m) {
        const cplx e = std::exp(exponent[m] * tau);
        for (int k = 0; k < 2; ++k) out[k] += (amplitude[k][m] * e).real();
    }
    return out;
}

std::array<double, 2> ModalPath::rate(double tau) const {
    std::array<double, 2> out{};
    for (int m = 0; m < 2; ++m) {
        const cplx e = exponent[m] * std::exp(exponent[m] * tau);
        for (int k = 0; k < 2; ++k) out[k] += (amplitude[k][m] * e).real();
    }
    return out;
}

std::array<double, 2> ModalPath::acceleration(double tau) const {
    std::array<double, 2> out{};
    for (int m = 0; m < 2; ++m) {
        const cplx e = exponent[m] * exponent[m] * std::exp(exponent[m] * tau);
        for (int k = 0; k < 2; ++k) out[k] += (amplitude[k][m] * e).real();
    }
    return out;
}

std::array<cplx, 2> ModalPath::spectrum(double omega, double t) const {
    std::array<cplx, 2> out{};
    for (int m = 0; m < 2; ++m) {
        const cplx ep = exp_integral(exponent[m] + I * omega, t);
        const cplx em = exp_integral(std::conj(exponent[m]) + I * omega, t);
        for (int k = 0; k < 2; ++k) out[k] += 0.5 * (amplitude[k][m] * ep + std::conj(amplitude[k][m]) * em);
    }
    return out;
}

ModalPath& ModalPath::operator+=(const ModalPath& o) {
    for (int k = 0; k < 2; ++k)
        for (int m = 0; m < 2; ++m) amplitude[k][m] += o.amplitude[k][m];
    return *this;
}

ModalPath ModalPath::scaled(double s) const {
    ModalPath p = *this;
    for (auto& row : p.amplitude)
        for (auto& a : row) a *= s;
    return p;
}

void check_caustic(const NormalModes& modes, double t) {
    for (int k = 0; k < 2; ++k)
        if (std::abs(std::sin(modes.frequency[k] * t)) < 1e-8)
            throw Error(ErrorCode::caustic_time, "sin(Omega" + std::to_string(k + 1) + " t) vanishes at t = " +
                                                     std::to_string(t));
}

ModalPath homogeneous_path(const NormalModes& modes, Sector sector, const Endpoints& ends, double t) {
    check_caustic(modes, t);
    const double sigma = sector == Sector::damped ? -1.0 : 1.0;
    const double r1 = modes.ratio[0], r2 = modes.ratio[1];
    const double d = modes.coupling_factor();

    // Modal endpoint values: path = e1 q1 (1, r1) + q2 (r2, 1).
    const std::array<double, 2> q_initial{(ends.initial[0] - r2 * ends.initial[1]) / d,
                                          (ends.initial[1] - r1 * ends.initial[0]) / d};
    const std::array<double, 2> q_final{(ends.final[0] - r2 * ends.final[1]) / d,
                                        (ends.final[1] - r1 * ends.final[0]) / d};

    ModalPath p;
    for (int m = 0; m < 2; ++m) {
        const double om = modes.frequency[m], de = sigma * modes.decay[m];
        const double c = q_initial[m];
        const double s = (q_final[m] * std::exp(-de * t) - c * std::cos(om * t)) / std::sin(om * t);
        p.exponent[m] = cplx(de, om);
        const cplx a(c, -s);  // e^{de tau} (c cos + s sin)
        if (m == 0) {
            p.amplitude[0][0] = a;
            p.amplitude[1][0] = r1 * a;
        } else {
            p.amplitude[0][1] = r2 * a;
            p.amplitude[1][1] = a;
        }
    }
    return p;
}

std::array<double, 2> homogeneous_X_paths(const NormalModes& modes, const Endpoints& ends, double t, double tau) {
    return homogeneous_path(modes, Sector::damped, ends, t).value(tau);
}

std::array<double, 2> homogeneous_xi_paths(const NormalModes& modes, const Endpoints& ends,
                                           std::array<double, 2> partial, double t, double tau) {
    auto v = homogeneous_path(modes, Sector::antidamped, ends, t).value(tau);
    return {v[0] + partial[0], v[1] + partial[1]};
}

}  // namespace cqbm
