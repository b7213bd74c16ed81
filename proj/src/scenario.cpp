#include "cqbm/scenario.hpp"

#include <fmt/format.h>
#include <fmt/os.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "cqbm/error.hpp"
#include "cqbm/particular.hpp"

namespace cqbm {

SystemConfig preset(std::string_view name) {
    double coupling = 0.0, T2 = 300.0;
    if (name == "fig2") {
        coupling = 0.0;
    } else if (name == "fig3") {
        coupling = 0.3;
    } else if (name == "fig4") {
        coupling = 0.3;
        T2 = 900.0;
    } else {
        throw Error(ErrorCode::invalid_config, fmt::format("unknown scenario '{}' (expected fig2, fig3, fig4)", name));
    }
    const double m1 = 1e-23, w1 = 1e13, gamma = 0.01 * w1;
    SystemConfig c;
    c.osc1 = {m1, w1, gamma, std::nullopt};
    c.osc2 = {5.0 * m1, 3.0 * w1, gamma, std::nullopt};
    c.bath1 = {300.0, 50.0 * w1};
    c.bath2 = {T2, 50.0 * w1};
    c.coupling_dimensionless = coupling;
    c.force1.kind = c.force2.kind = ForceKind::exponential_step;
    c.force1.decay = c.force2.decay = 10.0 * gamma;
    c.force1.onset = 1e-13;
    c.force2.onset = 1e-12;
    c.force2.amplitude_sign = -1.0;
    c.time_grid = {3e-12, 2000};
    return c;
}

std::vector<std::string> preset_names() { return {"fig2", "fig3", "fig4"}; }

Engine::Engine(InternalConfig cfg)
    : cfg_(std::move(cfg)),
      modes_(solve_determinant(cfg_)),
      kernels_{make_noise_kernel(cfg_, 0), make_noise_kernel(cfg_, 1)} {}

TimePoint Engine::evaluate(double t) const {
    TimePoint p;
    p.t = t;
    const double s1 = cfg_.osc[0].sigma0_sq, s2 = cfg_.osc[1].sigma0_sq;
    if (t == 0.0) {
        p.state = initial_state(s1, s2, cfg_.hbar);
    } else {
        try {
            check_caustic(modes_, t);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::caustic_time) throw;
            p.skipped = true;
            p.skip_reason = e.what();
            return p;
        }
        const ParticularSolution partic = particular_solution(cfg_, modes_, t);
        p.action = classical_action_form(cfg_, modes_, partic, t);
        p.influence = influence_form(cfg_, modes_, partic, kernels_, t);
        p.state = reduce_to_state(propagator_exponent(p.action, p.influence, cfg_.hbar), s1, s2, cfg_.hbar);
    }
    p.report = report(p.state, t);
    p.report.herm_residual = hermiticity_residual(p.state);
    return p;
}

std::vector<TimePoint> run_trajectory(const Engine& engine, const std::vector<double>& times, int threads) {
    std::vector<TimePoint> out(times.size());
    int n = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    n = std::min<int>(n, static_cast<int>(std::max<std::size_t>(1, times.size())));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto work = [&] {
        for (std::size_t i; !failed && (i = next++) < times.size();) {
            try {
                out[i] = engine.evaluate(times[i]);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int k = 1; k < n; ++k) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    return out;
}

double MeanDeviation::worst() const { return std::max({x[0], x[1], p[0], p[1]}); }

oracle::MeanTrajectory oracle_means(const InternalConfig& cfg, const std::vector<TimePoint>& traj) {
    std::vector<double> times;
    for (const auto& p : traj)
        if (!p.skipped) times.push_back(p.t);
    return oracle::mean_ode(cfg, times);
}

MeanDeviation compare_means(const std::vector<TimePoint>& traj, const oracle::MeanTrajectory& ref) {
    std::array<double, 2> xs{}, ps{}, dx{}, dp{};
    std::size_t j = 0;
    for (const auto& p : traj) {
        if (p.skipped) continue;
        if (j >= ref.t.size()) throw Error(ErrorCode::invalid_config, "oracle trajectory shorter than engine grid");
        for (int k = 0; k < 2; ++k) {
            xs[k] = std::max(xs[k], std::abs(ref.x[j][k]));
            ps[k] = std::max(ps[k], std::abs(ref.p[j][k]));
            dx[k] = std::max(dx[k], std::abs(p.report.x_mean[k] - ref.x[j][k]));
            dp[k] = std::max(dp[k], std::abs(p.report.p_mean[k] - ref.p[j][k]));
        }
        ++j;
    }
    MeanDeviation d;
    for (int k = 0; k < 2; ++k) {
        d.x[k] = xs[k] > 0.0 ? dx[k] / xs[k] : dx[k];
        d.p[k] = ps[k] > 0.0 ? dp[k] / ps[k] : dp[k];
    }
    return d;
}

std::vector<InvariantCheck> check_invariants(const InternalConfig& cfg, const std::vector<TimePoint>& traj) {
    InvariantCheck rs{"robertson_schrodinger"}, sym{"symplectic"}, herm{"hermiticity"}, comm{"commutator"},
        pos{"positive_variances"}, imag{"imaginary_residue"}, nonherm{"dropped_terms"}, dec{"decoupling"};
    const double hb = cfg.hbar;
    double rs_min = INFINITY, sym_min = INFINITY;
    for (const auto& p : traj) {
        if (p.skipped) continue;
        const auto& r = p.report;
        for (int k = 0; k < 2; ++k) {
            rs_min = std::min(rs_min, r.robertson_schrodinger(k));
            comm.worst = std::max(comm.worst, r.commutator_residual[k]);
            if (!(r.var_x[k] > 0.0 && r.var_p[k] > 0.0)) pos.ok = false;
            // Dropped anti-Hermitian linear parts measured against the kept ones.
            const double width = std::sqrt(r.var_x[k]);
            const double kept = std::abs(k == 0 ? p.state.a_plus : p.state.b_plus) +
                                std::abs(k == 0 ? p.state.A_minus : p.state.B_minus);
            const double dropped = std::abs(k == 0 ? p.state.A_plus : p.state.B_plus) +
                                   std::abs(k == 0 ? p.state.a_minus : p.state.b_minus);
            nonherm.worst = std::max(nonherm.worst, dropped * width / (kept * width + 1.0));
        }
        sym_min = std::min(sym_min, r.symplectic_margin());
        herm.worst = std::max(herm.worst, r.herm_residual);
        imag.worst = std::max(imag.worst, p.state.imag_residue);
        if (cfg.coupling == 0.0)
            dec.worst = std::max(dec.worst, std::abs(r.cov_x1x2) / std::sqrt(r.var_x[0] * r.var_x[1]));
    }
    rs.worst = traj.empty() ? 0.0 : rs_min;
    rs.ok = rs_min >= -1e-10 * hb * hb;
    sym.worst = traj.empty() ? 0.0 : sym_min;
    sym.ok = sym_min >= -1e-10 * hb;
    herm.ok = herm.worst <= 1e-10;
    comm.ok = comm.worst <= 1e-10;
    imag.ok = imag.worst <= 1e-10;
    nonherm.ok = nonherm.worst <= 1e-6;
    dec.ok = dec.worst <= 1e-10;
    std::vector<InvariantCheck> out{rs, sym, herm, comm, pos, imag, nonherm};
    if (cfg.coupling == 0.0) out.push_back(dec);
    return out;
}

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

void write_covariance_csv(const std::filesystem::path& path, const std::vector<TimePoint>& traj,
                          const InternalUnits& u) {
    auto out = fmt::output_file(path.string());
    out.print("t,x1_mean,x2_mean,p1_mean,p2_mean,var_x1,var_x2,var_p1,var_p2,cov_x1x2,sym_xp1,sym_xp2,herm_residual\n");
    const double L = u.length, P = u.momentum;
    for (const auto& p : traj) {
        if (p.skipped) continue;
        const auto& r = p.report;
        out.print("{},{},{},{},{},{},{},{},{},{},{},{},{}\n", num(r.t * u.time), num(r.x_mean[0] * L),
                  num(r.x_mean[1] * L), num(r.p_mean[0] * P), num(r.p_mean[1] * P), num(r.var_x[0] * L * L),
                  num(r.var_x[1] * L * L), num(r.var_p[0] * P * P), num(r.var_p[1] * P * P),
                  num(r.cov_x1x2 * L * L), num(r.sym_xp[0] * u.action), num(r.sym_xp[1] * u.action),
                  num(r.herm_residual));
    }
}

void write_normalized_means_csv(const std::filesystem::path& path, const std::vector<TimePoint>& traj,
                                const InternalConfig& cfg, const InternalUnits& u) {
    auto out = fmt::output_file(path.string());
    out.print("t,x1_normalized,x2_normalized\n");
    for (const auto& p : traj) {
        if (p.skipped) continue;
        const auto m = normalized_means(p.report, cfg);
        out.print("{},{},{}\n", num(p.t * u.time), num(m[0]), num(m[1]));
    }
}

void write_force_profile_csv(const std::filesystem::path& path, const InternalConfig& cfg, const InternalUnits& u,
                             const std::vector<double>& times) {
    auto out = fmt::output_file(path.string());
    out.print("t,f1,f2\n");
    for (double t : times)
        out.print("{},{},{}\n", num(t * u.time), num(force_value(cfg.force[0], t) * u.force),
                  num(force_value(cfg.force[1], t) * u.force));
}

void write_oracle_csv(const std::filesystem::path& path, const oracle::MeanTrajectory& ref, const InternalUnits& u) {
    auto out = fmt::output_file(path.string());
    out.print("t,x1_mean,x2_mean,p1_mean,p2_mean\n");
    for (std::size_t i = 0; i < ref.t.size(); ++i)
        out.print("{},{},{},{},{}\n", num(ref.t[i] * u.time), num(ref.x[i][0] * u.length),
                  num(ref.x[i][1] * u.length), num(ref.p[i][0] * u.momentum), num(ref.p[i][1] * u.momentum));
}

void write_action_dump(const std::filesystem::path& path, const std::vector<TimePoint>& traj) {
    auto out = fmt::output_file(path.string());
    out.print("t,slot,alias,value\n");
    for (const auto& p : traj) {
        if (p.skipped || p.t == 0.0) continue;
        for (const auto& s : labeled_slots(p.action)) out.print("{},{},{},{}\n", num(p.t), s.slot, s.alias, num(s.value));
        const auto& g = p.influence;
        for (int k = 0; k < 2; ++k) {
            out.print("{},influence,A{},{}\n", num(p.t), k + 1, num(g.A(k)));
            out.print("{},influence,B{},{}\n", num(p.t), k + 1, num(g.B(k)));
            out.print("{},influence,C{},{}\n", num(p.t), k + 1, num(g.C(k)));
        }
        for (int j = 1; j <= 4; ++j) out.print("{},influence,E{},{}\n", num(p.t), j, num(g.E(j)));
    }
}

void write_state_dump(const std::filesystem::path& path, const std::vector<TimePoint>& traj) {
    auto out = fmt::output_file(path.string());
    out.print("t,g1,g12,g2,gp1,gp12,gp2,gpp11,gpp21,gpp12,gpp22,a_plus,b_plus,A_minus,B_minus,norm,"
              "a_minus,b_minus,A_plus,B_plus,imag_residue\n");
    for (const auto& p : traj) {
        if (p.skipped) continue;
        const auto& s = p.state;
        const double v[] = {s.g1,     s.g12,     s.g2,      s.gp1,     s.gp12,   s.gp2,    s.gpp11,
                            s.gpp21,  s.gpp12,   s.gpp22,   s.a_plus,  s.b_plus, s.A_minus, s.B_minus,
                            s.norm,   s.a_minus, s.b_minus, s.A_plus,  s.B_plus, s.imag_residue};
        out.print("{}", num(p.t));
        for (double x : v) out.print(",{}", num(x));
        out.print("\n");
    }
}

}  // namespace cqbm
