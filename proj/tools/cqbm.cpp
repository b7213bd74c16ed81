#include <CLI11.hpp>
#include <fmt/format.h>

#include <chrono>
#include <cstdio>
#include <filesystem>

#include "cqbm/config_io.hpp"
#include "cqbm/error.hpp"
#include "cqbm/scenario.hpp"

namespace fs = std::filesystem;
using namespace cqbm;

namespace {

constexpr int exit_validation = 2;
constexpr int exit_invariant = 3;

struct RunArgs {
    std::string scenario;
    std::string out;
    std::string config;
    bool verify = false;
    std::optional<double> cutoff;  // multiple of omega01
    std::optional<int> grid;
    std::optional<double> t_end;  // s
    bool dump_action = false;
    bool dump_state = false;
    int threads = 0;
};

SystemConfig resolve(const RunArgs& a) {
    SystemConfig c;
    if (a.scenario == "custom") {
        if (a.config.empty()) throw Error(ErrorCode::invalid_config, "scenario 'custom' needs --config <file>");
        c = load_config(a.config);
    } else {
        if (!a.config.empty())
            throw Error(ErrorCode::invalid_config, "--config is only used with the 'custom' scenario");
        c = preset(a.scenario);
    }
    if (a.cutoff) c.bath1.cutoff = c.bath2.cutoff = *a.cutoff * c.osc1.eigenfrequency;
    if (a.grid) c.time_grid.n_points = *a.grid;
    if (a.t_end) c.time_grid.t_end = *a.t_end;
    return c;
}

int run(const RunArgs& a) {
    const ValidatedConfig valid = validate_config(resolve(a));
    const InternalConfig cfg = to_internal(valid);
    const InternalUnits& units = valid.units;
    const fs::path out(a.out);
    fs::create_directories(out);

    const auto start = std::chrono::steady_clock::now();
    const Engine engine(cfg);
    const std::vector<double> times = cfg.grid();
    const auto traj = run_trajectory(engine, times, a.threads);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    int skipped = 0;
    for (const auto& p : traj)
        if (p.skipped) {
            ++skipped;
            fmt::print(stderr, "skipped t = {:.6e} s: {}\n", p.t * units.time, p.skip_reason);
        }

    {
        std::FILE* f = std::fopen((out / "config.json").string().c_str(), "w");
        if (!f) throw Error(ErrorCode::io, "cannot write " + (out / "config.json").string());
        fmt::print(f, "{}\n", dump_config(valid.physical));
        std::fclose(f);
    }
    write_covariance_csv(out / "covariance.csv", traj, units);
    write_normalized_means_csv(out / "normalized_means.csv", traj, cfg, units);
    write_force_profile_csv(out / "force_profile.csv", cfg, units, times);
    if (a.dump_action) write_action_dump(out / "action.csv", traj);
    if (a.dump_state) write_state_dump(out / "state.csv", traj);
    fmt::print("{} time points ({} skipped) in {:.1f} s -> {}\n", traj.size(), skipped, seconds, out.string());

    bool ok = true;
    for (const auto& c : check_invariants(cfg, traj)) {
        fmt::print("invariant {:<24} {}  worst {:.3e}\n", c.name, c.ok ? "ok" : "FAILED", c.worst);
        ok = ok && c.ok;
    }
    if (a.verify) {
        const auto ref = oracle_means(cfg, traj);
        write_oracle_csv(out / "oracle_means.csv", ref, units);
        const auto d = compare_means(traj, ref);
        const bool pass = d.worst() <= 1e-3;
        const std::string summary =
            fmt::format("mean deviation vs ODE oracle (relative L-inf): x1 {:.3e} x2 {:.3e} p1 {:.3e} p2 {:.3e} -> {}\n",
                        d.x[0], d.x[1], d.p[0], d.p[1], pass ? "ok" : "FAILED");
        fmt::print("{}", summary);
        std::FILE* f = std::fopen((out / "verify_summary.txt").string().c_str(), "w");
        if (f) {
            fmt::print(f, "{}", summary);
            std::fclose(f);
        }
        ok = ok && pass;
    }
    return ok ? 0 : exit_invariant;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Driven coupled oscillators in heat baths: density-matrix evolution"};
    app.require_subcommand(1);
    RunArgs a;
    auto* cmd = app.add_subcommand("run", "Evaluate a scenario over its time grid and write CSV output");
    cmd->add_option("scenario,--scenario", a.scenario, "fig2, fig3, fig4 or custom");
    cmd->add_option("out,--out", a.out, "Output directory");
    cmd->add_option("--config", a.config, "JSON configuration (custom scenario)");
    cmd->add_flag("--verify", a.verify, "Compare means with the ODE oracle");
    cmd->add_option("--cutoff", a.cutoff, "Bath cutoff as a multiple of omega01");
    cmd->add_option("--grid", a.grid, "Number of time points");
    cmd->add_option("--t-end", a.t_end, "End of the time grid in s");
    cmd->add_flag("--dump-action", a.dump_action, "Write action and influence coefficients");
    cmd->add_flag("--dump-state", a.dump_state, "Write density-matrix coefficients");
    cmd->add_option("--threads", a.threads, "Worker threads (0 = all cores)");
    auto* list = app.add_subcommand("list", "List built-in scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_validation;
    }
    if (list->parsed()) {
        for (const auto& n : preset_names()) fmt::print("{}\n", n);
        return 0;
    }
    if (a.scenario.empty() || a.out.empty()) {
        fmt::print(stderr, "run: scenario and output directory are required\n");
        return exit_validation;
    }
    try {
        return run(a);
    } catch (const Error& e) {
        fmt::print(stderr, "{}\n", e.what());
        const bool validation = e.code() == ErrorCode::invalid_config || e.code() == ErrorCode::io ||
                                e.code() == ErrorCode::coupling_too_strong || e.code() == ErrorCode::unequal_damping;
        return validation ? exit_validation : exit_invariant;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return exit_validation;
    }
}
