#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cqbm/action.hpp"
#include "cqbm/influence.hpp"
#include "cqbm/modes.hpp"
#include "cqbm/observables.hpp"
#include "cqbm/oracle.hpp"
#include "cqbm/reduction.hpp"
#include "cqbm/units.hpp"

namespace cqbm {

/// fig2, fig3 or fig4. Throws InvalidConfig for anything else.
SystemConfig preset(std::string_view name);
std::vector<std::string> preset_names();

struct TimePoint {
    double t = 0.0;
    bool skipped = false;
    std::string skip_reason;
    GaussianStateParams state;
    CovarianceReport report;
    ActionForm action;
    InfluenceForm influence;
};

/// Everything that does not depend on the final time, built once per configuration.
class Engine {
public:
    explicit Engine(InternalConfig cfg);

    const InternalConfig& config() const { return cfg_; }
    const NormalModes& modes() const { return modes_; }
    const std::array<NoiseKernel, 2>& kernels() const { return kernels_; }

    /// State and moments at time t. t = 0 is the initial state; caustic times come back skipped.
    TimePoint evaluate(double t) const;

private:
    InternalConfig cfg_;
    NormalModes modes_;
    std::array<NoiseKernel, 2> kernels_;
};

/// Evaluates every time in parallel; results in grid order.
std::vector<TimePoint> run_trajectory(const Engine& engine, const std::vector<double>& times, int threads = 0);

struct MeanDeviation {
    std::array<double, 2> x{}, p{};  // max |engine - oracle| / max |oracle| per column
    double worst() const;
};

MeanDeviation compare_means(const std::vector<TimePoint>& traj, const oracle::MeanTrajectory& ref);
oracle::MeanTrajectory oracle_means(const InternalConfig& cfg, const std::vector<TimePoint>& traj);

struct InvariantCheck {
    std::string name;
    bool ok = true;
    double worst = 0.0;
};

/// Physicality, Hermiticity, commutator and decoupling checks over a trajectory.
std::vector<InvariantCheck> check_invariants(const InternalConfig& cfg, const std::vector<TimePoint>& traj);

// CSV writers. Physical outputs use CGS units.
void write_covariance_csv(const std::filesystem::path& path, const std::vector<TimePoint>& traj,
                          const InternalUnits& units);
void write_normalized_means_csv(const std::filesystem::path& path, const std::vector<TimePoint>& traj,
                                const InternalConfig& cfg, const InternalUnits& units);
void write_force_profile_csv(const std::filesystem::path& path, const InternalConfig& cfg, const InternalUnits& units,
                             const std::vector<double>& times);
void write_oracle_csv(const std::filesystem::path& path, const oracle::MeanTrajectory& ref, const InternalUnits& units);
/// Action and influence coefficients in internal units, one row per (t, slot).
void write_action_dump(const std::filesystem::path& path, const std::vector<TimePoint>& traj);
/// GaussianStateParams in internal units, one row per time.
void write_state_dump(const std::filesystem::path& path, const std::vector<TimePoint>& traj);

}  // namespace cqbm
