#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cqbm/error.hpp"
#include "support.hpp"

using namespace cqbm;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(CQBM_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<double> grid(const InternalConfig& c, int n) {
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = c.t_end * i / (n - 1);
    return t;
}

}  // namespace

TEST(Scenario, Presets) {
    const auto names = preset_names();
    EXPECT_EQ(names.size(), 3u);
    const auto p = preset("fig4");
    EXPECT_DOUBLE_EQ(p.osc2.mass, 5e-23);
    EXPECT_DOUBLE_EQ(p.osc2.eigenfrequency, 3e13);
    EXPECT_EQ(p.bath2.temperature, 900.0);
    EXPECT_EQ(p.coupling_dimensionless, 0.3);
    EXPECT_EQ(p.force1.decay, 1e12);
    EXPECT_EQ(p.time_grid.n_points, 2000);
    EXPECT_EQ(preset("fig2").coupling_dimensionless, 0.0);
    EXPECT_THROW(preset("fig9"), Error);
}

TEST(Scenario, InitialPointIsTheInitialState) {
    const Engine e(test::internal("fig3"));
    const auto p = e.evaluate(0.0);
    EXPECT_FALSE(p.skipped);
    EXPECT_NEAR(p.report.var_x[0], 0.5, 1e-15);
    EXPECT_NEAR(p.report.var_p[1], 1.0 / (4.0 / 30.0), 1e-13);
    EXPECT_EQ(p.report.x_mean[0], 0.0);
}

TEST(Scenario, CausticPointsAreSkipped) {
    const Engine e(test::internal("fig3"));
    const auto p = e.evaluate(M_PI / e.modes().frequency[1]);
    EXPECT_TRUE(p.skipped);
    EXPECT_FALSE(p.skip_reason.empty());
}

TEST(Scenario, DecouplingWithoutCoupling) {
    const auto c = test::internal("fig2");
    const Engine e(c);
    const auto traj = run_trajectory(e, grid(c, 61), 2);
    for (const auto& p : traj) {
        if (p.t < c.force[1].onset) {
            EXPECT_LE(std::abs(p.report.x_mean[1]) / std::sqrt(c.osc[1].sigma0_sq), 1e-10) << p.t;
        }
        EXPECT_LE(std::abs(p.report.cov_x1x2), 1e-10 * std::sqrt(p.report.var_x[0] * p.report.var_x[1]));
    }
}

TEST(Scenario, CouplingTransmitsTheFirstForce) {
    const auto c = test::internal("fig3");
    const auto p = Engine(c).evaluate(6.0);
    EXPECT_GT(std::abs(normalized_means(p.report, c)[1]), 1e-3);
}

TEST(Scenario, MeansDoNotDependOnTemperature) {
    const auto c3 = test::internal("fig3"), c4 = test::internal("fig4");
    const auto g = grid(c3, 41);
    const auto a = run_trajectory(Engine(c3), g, 1), b = run_trajectory(Engine(c4), g, 1);
    for (std::size_t i = 0; i < g.size(); ++i)
        for (int k = 0; k < 2; ++k) {
            EXPECT_NEAR(a[i].report.x_mean[k], b[i].report.x_mean[k], 1e-10);
            EXPECT_NEAR(a[i].report.p_mean[k], b[i].report.p_mean[k], 1e-10);
        }
}

TEST(Scenario, LongTimeMeansDecay) {
    const auto c = test::internal("fig3");
    const auto p = Engine(c).evaluate(3000.0);
    const auto n = normalized_means(p.report, c);
    EXPECT_LE(std::abs(n[0]) + std::abs(n[1]), 1e-8);
}

TEST(Scenario, CsvOutputIsDeterministic) {
    const auto v = validate_config(preset("fig3"));
    const auto c = to_internal(v);
    const auto g = grid(c, 25);
    const fs::path dir = fs::temp_directory_path() / "cqbm_scenario_test";
    fs::create_directories(dir);
    write_covariance_csv(dir / "a.csv", run_trajectory(Engine(c), g, 1), v.units);
    write_covariance_csv(dir / "b.csv", run_trajectory(Engine(c), g, 3), v.units);
    const auto text = slurp(dir / "a.csv");
    EXPECT_EQ(text, slurp(dir / "b.csv"));
    EXPECT_EQ(text.substr(0, text.find('\n')),
              "t,x1_mean,x2_mean,p1_mean,p2_mean,var_x1,var_x2,var_p1,var_p2,cov_x1x2,sym_xp1,sym_xp2,herm_residual");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 26);
}

TEST(Scenario, PhysicalUnitsInCsv) {
    const auto v = validate_config(preset("fig3"));
    const auto c = to_internal(v);
    const fs::path dir = fs::temp_directory_path() / "cqbm_scenario_units";
    fs::create_directories(dir);
    write_covariance_csv(dir / "c.csv", run_trajectory(Engine(c), {0.0}, 1), v.units);
    std::istringstream in(slurp(dir / "c.csv"));
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    std::vector<double> vals;
    std::stringstream rs(row);
    for (std::string cell; std::getline(rs, cell, ',');) vals.push_back(std::stod(cell));
    // var_x1(0) = hbar / (2 M1 omega01) in cm^2, var_p1(0) = hbar M1 omega01 / 2
    EXPECT_NEAR(vals[5] / (hbar_cgs / (2e-23 * 1e13)), 1.0, 1e-13);
    EXPECT_NEAR(vals[7] / (hbar_cgs * 1e-23 * 1e13 / 2), 1.0, 1e-13);
}

TEST(Cli, ExitCodes) {
    const fs::path dir = fs::temp_directory_path() / "cqbm_cli_test";
    EXPECT_EQ(run_cli("run fig3 " + dir.string() + " --grid 21 --verify --dump-action --dump-state --threads 2"), 0);
    for (const char* f : {"covariance.csv", "normalized_means.csv", "force_profile.csv", "oracle_means.csv",
                          "verify_summary.txt", "action.csv", "state.csv", "config.json"})
        EXPECT_TRUE(fs::exists(dir / f)) << f;
    EXPECT_EQ(run_cli("run fig7 " + dir.string()), 2);
    EXPECT_EQ(run_cli("run custom " + dir.string()), 2);
    EXPECT_EQ(run_cli("run custom " + dir.string() + " --config /nonexistent.json"), 2);
    EXPECT_EQ(run_cli("run fig3 " + dir.string() + " --grid 1"), 2);
    EXPECT_EQ(run_cli("run --bogus"), 2);
    // the dumped config runs as a custom scenario
    EXPECT_EQ(run_cli("run custom " + (dir / "again").string() + " --config " + (dir / "config.json").string()), 0);
    EXPECT_EQ(slurp(dir / "covariance.csv"), slurp(dir / "again" / "covariance.csv"));
}
