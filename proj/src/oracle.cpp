#include "cqbm/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "cqbm/error.hpp"

namespace cqbm::oracle {

namespace odeint = boost::numeric::odeint;
namespace bq = boost::math::quadrature;

MeanTrajectory mean_ode(const InternalConfig& cfg, std::span<const double> times, double tol) {
    MeanTrajectory out;
    if (times.empty()) return out;
    const auto& o = cfg.osc;
    const double lam = cfg.coupling;
    auto rhs = [&](const OdeState& s, OdeState& ds, double tau) {
        ds[0] = s[1];
        ds[1] = -2.0 * o[0].gamma * s[1] - o[0].omega0 * o[0].omega0 * s[0] +
                (lam * s[2] + force_value(cfg.force[0], tau)) / o[0].mass;
        ds[2] = s[3];
        ds[3] = -2.0 * o[1].gamma * s[3] - o[1].omega0 * o[1].omega0 * s[2] +
                (lam * s[0] + force_value(cfg.force[1], tau)) / o[1].mass;
    };

    // Restart the stepper at every force discontinuity.
    const double t_last = times.back();
    std::vector<double> cuts;
    for (const auto& f : cfg.force)
        for (double b : force_breakpoints(f, t_last)) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(t_last);

    OdeState state{0, 0, 0, 0};
    double now = 0.0;
    std::size_t next = 0;
    auto record = [&](const OdeState& s, double tau) {
        out.t.push_back(tau);
        out.x.push_back({s[0], s[2]});
        out.p.push_back({o[0].mass * s[1], o[1].mass * s[3]});
    };
    while (next < times.size() && times[next] <= 0.0) record(state, times[next++]);

    auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_dopri5<OdeState>());
    for (double cut : cuts) {
        if (cut <= now) continue;
        std::vector<double> stops{now};
        while (next < times.size() && times[next] <= cut) stops.push_back(times[next++]);
        const std::size_t requested = stops.size() - 1;
        if (stops.back() < cut) stops.push_back(cut);
        std::vector<OdeState> states;
        std::vector<double> at;
        try {
            odeint::integrate_times(stepper, rhs, state, stops.begin(), stops.end(), (cut - now) / 64.0,
                                    [&](const OdeState& s, double tau) {
                                        states.push_back(s);
                                        at.push_back(tau);
                                    },
                                    odeint::max_step_checker(1000000));
        } catch (const std::exception& e) {
            throw Error(ErrorCode::step_failure, std::string("mean ODE: ") + e.what());
        }
        for (std::size_t k = 1; k <= requested; ++k) record(states[k], at[k]);
        state = states.back();
        now = cut;
        for (double v : state)
            if (!std::isfinite(v)) throw Error(ErrorCode::step_failure, "mean ODE diverged");
    }
    return out;
}

Eigen::Matrix2cd susceptibility(const InternalConfig& cfg, double w) {
    using C = std::complex<double>;
    Eigen::Matrix2cd D;
    for (int k = 0; k < 2; ++k) {
        const auto& o = cfg.osc[k];
        D(k, k) = o.mass * C(o.omega0 * o.omega0 - w * w, -2.0 * o.gamma * w);
    }
    D(0, 1) = D(1, 0) = -cfg.coupling;
    return D.inverse();
}

namespace {

// Breakpoints that isolate the resonances for the adaptive rule.
std::vector<double> resonance_cuts(const InternalConfig& cfg, double cutoff) {
    std::vector<double> cuts{0.0};
    const double width = std::max(cfg.osc[0].gamma, cfg.osc[1].gamma);
    double top = 2.0 * std::max(cfg.osc[0].omega0, cfg.osc[1].omega0);
    const double step = std::max(5.0 * width, 1e-3 * top);
    for (double w = step; w < std::min(top, cutoff); w += step) cuts.push_back(w);
    cuts.push_back(cutoff);
    return cuts;
}

}  // namespace

Eigen::Matrix2d stationary_covariance(const InternalConfig& cfg) {
    const double cutoff = std::max(cfg.bath[0].cutoff, cfg.bath[1].cutoff);
    auto entry = [&](int i, int j, double w) {
        if (w <= 0.0) w = 1e-300;
        const Eigen::Matrix2cd chi = susceptibility(cfg, w);
        std::complex<double> acc = 0.0;
        for (int k = 0; k < 2; ++k) {
            if (w > cfg.bath[k].cutoff) continue;
            const double weight = 2.0 * cfg.osc[k].mass * cfg.osc[k].gamma * omega_coth(w, cfg.bath[k].thermal_energy / cfg.hbar);
            acc += chi(i, k) * weight * std::conj(chi(j, k));
        }
        return acc.real();
    };
    Eigen::Matrix2d S;
    const auto cuts = resonance_cuts(cfg, cutoff);
    for (int i = 0; i < 2; ++i)
        for (int j = i; j < 2; ++j) {
            double sum = 0.0;
            for (std::size_t c = 0; c + 1 < cuts.size(); ++c)
                sum += bq::gauss_kronrod<double, 61>::integrate([&](double w) { return entry(i, j, w); }, cuts[c],
                                                                 cuts[c + 1], 15, 1e-13);
            S(i, j) = S(j, i) = cfg.hbar / M_PI * sum;
        }
    return S;
}

std::array<double, 3> fdt_stationary_variance(const InternalConfig& cfg) {
    InternalConfig eq = cfg;
    eq.bath[1].thermal_energy = cfg.bath[0].thermal_energy;
    const double cutoff = std::max(cfg.bath[0].cutoff, cfg.bath[1].cutoff);
    eq.bath[0].cutoff = eq.bath[1].cutoff = cutoff;
    const double T = eq.bath[0].thermal_energy;
    auto entry = [&](int i, int j, double w) {
        if (w <= 0.0) return 0.0;
        const Eigen::Matrix2cd chi = susceptibility(eq, w);
        return omega_coth(w, T / eq.hbar) / w * chi(i, j).imag();
    };
    const auto cuts = resonance_cuts(eq, cutoff);
    std::array<double, 3> out{};
    const int idx[3][2] = {{0, 0}, {1, 1}, {0, 1}};
    for (int e = 0; e < 3; ++e) {
        double sum = 0.0;
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c)
            sum += bq::gauss_kronrod<double, 61>::integrate([&](double w) { return entry(idx[e][0], idx[e][1], w); },
                                                             cuts[c], cuts[c + 1], 15, 1e-13);
        out[e] = eq.hbar / M_PI * sum;
    }
    return out;
}

double noise_kernel(double mass, double gamma, double thermal, double cutoff, double s, double hbar) {
    const double pref = 2.0 * mass * gamma / (hbar * M_PI);
    const double width = std::min(1.0, 3.0 / std::max(std::abs(s), 1e-300));
    const int panels = std::max(1, static_cast<int>(std::ceil(cutoff / width)));
    const double h = cutoff / panels;
    double sum = 0.0;
    for (int k = 0; k < panels; ++k)
        sum += bq::gauss<double, 30>::integrate(
            [&](double w) { return omega_coth(w, thermal / hbar) * std::cos(w * s); }, k * h, (k + 1) * h);
    return pref * sum;
}

namespace {

template <int N>
Eigen::MatrixXd nested_gl(const std::vector<std::function<double(double)>>& paths,
                          const std::function<double(double)>& kernel, double t) {
    using G = bq::gauss<double, N>;
    // Full n-point rule on [-1, 1] from Boost's half-range tables.
    std::vector<double> x, w;
    const auto& ab = G::abscissa();
    const auto& wt = G::weights();
    for (std::size_t i = 0; i < ab.size(); ++i) {
        if (ab[i] == 0.0) {
            x.push_back(0.0);
            w.push_back(wt[i]);
            continue;
        }
        x.push_back(ab[i]);
        w.push_back(wt[i]);
        x.push_back(-ab[i]);
        w.push_back(wt[i]);
    }
    const int n = static_cast<int>(x.size());
    const int m = static_cast<int>(paths.size());
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(m, m);
    std::vector<double> outer_vals(m), inner(m);
    for (int i = 0; i < n; ++i) {
        const double tau = 0.5 * t * (x[i] + 1.0);
        const double wo = 0.5 * t * w[i];
        for (int k = 0; k < m; ++k) outer_vals[k] = paths[k](tau);
        std::fill(inner.begin(), inner.end(), 0.0);
        for (int j = 0; j < n; ++j) {
            const double s = 0.5 * tau * (x[j] + 1.0);
            const double kw = 0.5 * tau * w[j] * kernel(tau - s);
            for (int l = 0; l < m; ++l) inner[l] += kw * paths[l](s);
        }
        for (int k = 0; k < m; ++k)
            for (int l = 0; l < m; ++l) acc(k, l) += wo * outer_vals[k] * inner[l];
    }
    return acc;
}

Eigen::MatrixXd nested(const std::vector<std::function<double(double)>>& paths,
                       const std::function<double(double)>& kernel, double t, int n) {
    switch (n) {
        case 64: return nested_gl<64>(paths, kernel, t);
        case 128: return nested_gl<128>(paths, kernel, t);
        case 256: return nested_gl<256>(paths, kernel, t);
        case 512: return nested_gl<512>(paths, kernel, t);
        case 1024: return nested_gl<1024>(paths, kernel, t);
        default: throw Error(ErrorCode::invalid_config, "brute-force order must be one of 64, 128, 256, 512, 1024");
    }
}

}  // namespace

double brute_double_integral(const std::function<double(double)>& a, const std::function<double(double)>& kernel,
                             const std::function<double(double)>& b, double t, int n) {
    // Row a, column b of the unsymmetrized form.
    const Eigen::MatrixXd m = nested({a, b}, kernel, t, n);
    return m(0, 1);
}

Eigen::MatrixXd brute_quadratic_form(const std::vector<std::function<double(double)>>& paths,
                                     const std::function<double(double)>& kernel, double t, int n) {
    const Eigen::MatrixXd m = nested(paths, kernel, t, n);
    return 0.5 * (m + m.transpose());
}

}  // namespace cqbm::oracle
