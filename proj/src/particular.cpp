#include "cqbm/particular.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cqbm/error.hpp"
#include "cqbm/numerics/adaptive.hpp"

namespace cqbm {
namespace {

constexpr cplx I{0.0, 1.0};

// Identically zero on [0, t].
bool zero_force(const ForceSpec& f, double t) {
    if (f.kind == ForceKind::zero) return true;
    if (f.kind == ForceKind::exponential_step) return f.amplitude.value_or(0.0) == 0.0 || f.onset >= t;
    return std::all_of(f.samples.begin(), f.samples.end(), [](double v) { return v == 0.0; });
}

std::vector<double> all_breakpoints(const InternalConfig& cfg, double t) {
    auto b = force_breakpoints(cfg.force[0], t);
    auto b2 = force_breakpoints(cfg.force[1], t);
    b.insert(b.end(), b2.begin(), b2.end());
    return b;
}

}  // namespace

numerics::CompositeRule time_rule(const InternalConfig& cfg, const NormalModes& modes, double t) {
    double fastest = std::max(modes.frequency[0], modes.frequency[1]);
    for (const auto& f : cfg.force)
        if (f.kind == ForceKind::exponential_step) fastest = std::max(fastest, f.decay);
    const double width = 0.5 * std::numbers::pi / fastest;
    return numerics::CompositeRule(0.0, t, all_breakpoints(cfg, t), width, 128, 16);
}

ParticularSolution::ParticularSolution(const InternalConfig& cfg, const NormalModes& modes, double t,
                                       numerics::CompositeRule rule)
    : t_(t), rule_(std::move(rule)) {
    check_caustic(modes, t);
    force_ = cfg.force;
    mass_ = {cfg.osc[0].mass, cfg.osc[1].mass};
    ratio_ = modes.ratio;
    trivial_ = zero_force(force_[0], t) && zero_force(force_[1], t);

    const std::size_t n = rule_.size();
    node_value_.assign(n, {0.0, 0.0});
    node_rate_.assign(n, {0.0, 0.0});
    const auto edges = rule_.edges();
    const auto nodes = rule_.nodes();
    const auto weights = rule_.weights();
    const int order = rule_.order();

    std::array<std::array<std::vector<double>, 2>, 2> q;  // [mode][value/rate] at nodes
    for (int m = 0; m < 2; ++m) {
        Mode& md = mode_[m];
        md.omega = modes.frequency[m];
        md.gamma = modes.decay[m];
        md.denom = -md.omega * std::sin(md.omega * t);
        md.lower.assign(edges.size(), 0.0);
        md.upper.assign(edges.size(), 0.0);
        q[m][0].assign(n, 0.0);
        q[m][1].assign(n, 0.0);
        if (trivial_) continue;

        std::vector<double> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double s = nodes[i];
            const double g = modal_force(m, s) * std::exp(-md.gamma * s);
            a[i] = g * std::sin(md.omega * s);
            b[i] = g * std::sin(md.omega * (t - s));
        }
        const auto ca = rule_.cumulative(a);
        const auto cb = rule_.cumulative(b);
        for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
            double sa = 0.0, sb = 0.0;
            for (int j = 0; j < order; ++j) {
                const std::size_t i = p * order + j;
                sa += weights[i] * a[i];
                sb += weights[i] * b[i];
            }
            md.lower[p + 1] = md.lower[p] + sa;
            md.upper[p + 1] = md.upper[p] + sb;
        }
        const double total_b = md.upper.back();
        for (std::size_t i = 0; i < n; ++i) {
            const double tau = nodes[i];
            const double e = std::exp(md.gamma * tau);
            const double s1 = std::sin(md.omega * tau), c1 = std::cos(md.omega * tau);
            const double s2 = std::sin(md.omega * (t - tau)), c2 = std::cos(md.omega * (t - tau));
            const double rest = total_b - cb[i];
            q[m][0][i] = e * (s2 * ca[i] + s1 * rest) / md.denom;
            q[m][1][i] = e * ((md.gamma * s2 - md.omega * c2) * ca[i] + (md.gamma * s1 + md.omega * c1) * rest) / md.denom;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        node_value_[i] = combine({q[0][0][i], q[1][0][i]});
        node_rate_[i] = combine({q[0][1][i], q[1][1][i]});
    }
}

double ParticularSolution::modal_force(int m, double s) const {
    const double F1 = 2.0 * force_value(force_[0], s) / mass_[0];
    const double F2 = 2.0 * force_value(force_[1], s) / mass_[1];
    const double d = 1.0 - ratio_[0] * ratio_[1];
    return m == 0 ? (F1 - ratio_[1] * F2) / d : (F2 - ratio_[0] * F1) / d;
}

std::array<double, 2> ParticularSolution::combine(const std::array<double, 2>& q) const {
    return {q[0] + ratio_[1] * q[1], ratio_[0] * q[0] + q[1]};
}

std::array<double, 2> ParticularSolution::partial_integrals(int m, double tau) const {
    const Mode& md = mode_[m];
    const auto edges = rule_.edges();
    auto it = std::upper_bound(edges.begin(), edges.end(), tau);
    std::size_t p = it == edges.begin() ? 0 : static_cast<std::size_t>(it - edges.begin()) - 1;
    p = std::min(p, edges.size() - 2);
    const double a = edges[p];
    double lower = md.lower[p], upper = md.upper[p];
    if (tau > a) {
        const double t = t_;
        lower += numerics::gauss_integrate(
            [&](double s) { return modal_force(m, s) * std::exp(-md.gamma * s) * std::sin(md.omega * s); }, a, tau,
            rule_.order());
        upper += numerics::gauss_integrate(
            [&](double s) { return modal_force(m, s) * std::exp(-md.gamma * s) * std::sin(md.omega * (t - s)); }, a,
            tau, rule_.order());
    }
    return {lower, upper};
}

std::array<double, 2> ParticularSolution::value(double tau) const {
    if (trivial_) return {0.0, 0.0};
    std::array<double, 2> q{};
    for (int m = 0; m < 2; ++m) {
        const Mode& md = mode_[m];
        const auto [lower, upper] = partial_integrals(m, tau);
        const double e = std::exp(md.gamma * tau);
        q[m] = e * (std::sin(md.omega * (t_ - tau)) * lower + std::sin(md.omega * tau) * (md.upper.back() - upper)) /
               md.denom;
    }
    return combine(q);
}

std::array<double, 2> ParticularSolution::rate(double tau) const {
    if (trivial_) return {0.0, 0.0};
    std::array<double, 2> q{};
    for (int m = 0; m < 2; ++m) {
        const Mode& md = mode_[m];
        const auto [lower, upper] = partial_integrals(m, tau);
        const double e = std::exp(md.gamma * tau);
        const double s1 = std::sin(md.omega * tau), c1 = std::cos(md.omega * tau);
        const double s2 = std::sin(md.omega * (t_ - tau)), c2 = std::cos(md.omega * (t_ - tau));
        q[m] = e * ((md.gamma * s2 - md.omega * c2) * lower + (md.gamma * s1 + md.omega * c1) * (md.upper.back() - upper)) /
               md.denom;
    }
    return combine(q);
}

double ParticularSolution::scale() const {
    double s = 0.0;
    for (const auto& v : node_value_) s = std::max({s, std::abs(v[0]), std::abs(v[1])});
    return s > 0.0 ? s : 1.0;
}

std::array<double, 4> ParticularSolution::boundary_residuals() const {
    const auto a = value(0.0), b = value(t_);
    const double s = scale();
    return {a[0] / s, a[1] / s, b[0] / s, b[1] / s};
}

ParticularSolution particular_solution(const InternalConfig& cfg, const NormalModes& modes, double t) {
    return ParticularSolution(cfg, modes, t, time_rule(cfg, modes, t));
}

FourierRoute fourier_route(const InternalConfig& cfg, const NormalModes& modes, double t, std::span<const double> taus,
                           double window_factor) {
    const double gamma = cfg.osc[0].gamma;
    if (!(gamma > 0.0))
        throw Error(ErrorCode::invalid_config, "the Fourier route needs positive damping (real poles otherwise)");
    const auto& o1 = cfg.osc[0];
    const auto& o2 = cfg.osc[1];
    const double kappa = 1.0;
    double fmax = std::max(modes.frequency[0], modes.frequency[1]);
    for (const auto& f : cfg.force)
        if (f.kind == ForceKind::exponential_step) fmax = std::max(fmax, f.decay);
    const double window = window_factor * fmax;

    // Inverse of the driven response, force spectra F_k(w) = int_0^t (2 f_k / M_k) e^{-i w s} ds.
    auto remainder = [&](double w, std::array<cplx, 2>& out) {
        const cplx F1 = 2.0 * force_spectrum(cfg.force[0], t, w) / o1.mass;
        const cplx F2 = 2.0 * force_spectrum(cfg.force[1], t, w) / o2.mass;
        const cplx D1 = o1.omega0 * o1.omega0 - w * w - 2.0 * I * gamma * w;
        const cplx D2 = o2.omega0 * o2.omega0 - w * w - 2.0 * I * gamma * w;
        const cplx D = D1 * D2 - cfg.coupling * cfg.coupling / (o1.mass * o2.mass);
        const double sub = 1.0 / (w * w + kappa * kappa);
        out[0] = ((cfg.coupling / o1.mass) * F2 + D2 * F1) / D + F1 * sub;
        out[1] = ((cfg.coupling / o2.mass) * F1 + D1 * F2) / D + F2 * sub;
    };

    std::vector<double> pts(taus.begin(), taus.end());
    pts.push_back(0.0);
    pts.push_back(t);
    const std::size_t n = pts.size();
    auto integrand = [&](double w, std::span<double> out) {
        std::array<cplx, 2> r;
        remainder(w, r);
        for (std::size_t j = 0; j < n; ++j) {
            const cplx e = std::exp(I * w * pts[j]);
            out[2 * j] = (r[0] * e).real() / std::numbers::pi;
            out[2 * j + 1] = (r[1] * e).real() / std::numbers::pi;
        }
    };
    const double width = std::min(0.5, std::numbers::pi / t);
    std::vector<double> cuts;
    const int pieces = static_cast<int>(std::ceil(window / width));
    for (int i = 0; i <= pieces; ++i) cuts.push_back(window * i / pieces);
    numerics::AdaptiveOptions opts;
    opts.rel_tol = 1e-10;
    auto common = [](std::span<const double> total, std::span<double> ref) {
        double m = 0.0;
        for (double v : total) m = std::max(m, std::abs(v));
        std::fill(ref.begin(), ref.end(), m);
    };
    const auto res = numerics::integrate_adaptive(integrand, 2 * n, cuts, opts, common);

    std::array<cplx, 2> edge;
    remainder(window, edge);
    FourierRoute out;
    out.converged = res.converged;
    out.tail_bound = std::max(std::abs(edge[0]), std::abs(edge[1])) * window / (3.0 * std::numbers::pi);

    // Subtracted part: -(1 / 2 kappa) int_0^t F(s) e^{-kappa |tau - s|} ds.
    const auto breaks = all_breakpoints(cfg, t);
    auto convolution = [&](int k, double tau) {
        std::vector<double> cut(breaks);
        if (tau > 0.0 && tau < t) cut.push_back(tau);
        numerics::CompositeRule rule(0.0, t, cut, std::min(0.25, 0.5 * std::numbers::pi / fmax), 8, 16);
        return rule.integrate([&](double s) {
                   return 2.0 * force_value(cfg.force[k], s) / cfg.osc[k].mass * std::exp(-kappa * std::abs(tau - s));
               }) /
               (2.0 * kappa);
    };
    std::vector<std::array<double, 2>> raw(n);
    for (std::size_t j = 0; j < n; ++j)
        for (int k = 0; k < 2; ++k) raw[j][k] = res.value[2 * j + k] - convolution(k, pts[j]);

    // Homogeneous correction so both ends vanish.
    const Endpoints ends{raw[n - 2], raw[n - 1]};
    const ModalPath h = homogeneous_path(modes, Sector::antidamped, ends, t);
    out.taus.assign(taus.begin(), taus.end());
    for (std::size_t j = 0; j + 2 < n; ++j) {
        const auto hv = h.value(pts[j]);
        out.values.push_back({raw[j][0] - hv[0], raw[j][1] - hv[1]});
    }
    return out;
}

double verify_against_fourier(const ParticularSolution& p, const InternalConfig& cfg, const NormalModes& modes,
                              int n_interior, double tol) {
    if (p.trivial()) return 0.0;
    const double t = p.duration();
    std::vector<double> taus;
    for (int j = 1; j <= n_interior; ++j) taus.push_back(t * j / (n_interior + 1));
    const auto route = fourier_route(cfg, modes, t, taus);
    const double scale = p.scale();
    double worst = 0.0;
    for (std::size_t j = 0; j < taus.size(); ++j) {
        const auto v = p.value(taus[j]);
        worst = std::max({worst, std::abs(v[0] - route.values[j][0]) / scale, std::abs(v[1] - route.values[j][1]) / scale});
    }
    if (worst > tol)
        throw Error(ErrorCode::quadrature_non_convergence,
                    "particular solution and Fourier route disagree by " + std::to_string(worst));
    return worst;
}

}  // namespace cqbm
