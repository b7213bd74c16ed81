#pragma once

#include <array>
#include <optional>

#include "cqbm/forcing.hpp"

namespace cqbm {

// CODATA 2018, CGS.
inline constexpr double hbar_cgs = 1.054571817e-27;       // erg s
inline constexpr double boltzmann_cgs = 1.380649e-16;     // erg / K

struct OscillatorParams {
    double mass = 0.0;            // g
    double eigenfrequency = 0.0;  // rad/s
    double damping_rate = 0.0;    // rad/s
    std::optional<double> initial_variance;  // cm^2, default hbar / (2 M omega0)
};

struct BathParams {
    double temperature = 0.0;  // K
    double cutoff = 0.0;       // rad/s
};

struct TimeGrid {
    double t_end = 0.0;  // s
    int n_points = 0;
};

struct SystemConfig {
    OscillatorParams osc1, osc2;
    BathParams bath1, bath2;
    double coupling_dimensionless = 0.0;
    ForceSpec force1, force2;  // times in s, forces in dyn
    TimeGrid time_grid;
};

/// Internal units: hbar = M1 = omega01 = 1. Each field is the CGS size of one internal unit.
struct InternalUnits {
    double time = 1.0;         // s
    double mass = 1.0;         // g
    double length = 1.0;       // cm, sqrt(hbar / (M1 omega01))
    double frequency = 1.0;    // rad/s
    double force = 1.0;        // dyn
    double momentum = 1.0;     // g cm / s
    double energy = 1.0;       // erg
    double action = 1.0;       // erg s
    double temperature = 1.0;  // K per unit of k_B T / (hbar omega01)

    static InternalUnits from(double mass1, double omega01);
};

struct ValidatedConfig {
    SystemConfig physical;
    double coupling = 0.0;  // lambda, dyn/cm
    InternalUnits units;
};

struct InternalOscillator {
    double mass = 1.0;
    double omega0 = 1.0;
    double gamma = 0.0;
    double sigma0_sq = 0.5;
};

struct InternalBath {
    double thermal_energy = 0.0;  // k_B T in units of hbar omega01; 0 means zero temperature
    double cutoff = 0.0;
};

struct InternalConfig {
    std::array<InternalOscillator, 2> osc;
    std::array<InternalBath, 2> bath;
    double coupling = 0.0;
    std::array<ForceSpec, 2> force;  // amplitudes resolved
    double t_end = 0.0;
    int n_points = 0;
    double hbar = 1.0;

    /// Uniform time grid over [0, t_end].
    std::vector<double> grid() const;
};

double physical_coupling(double dimensionless, double m1, double m2, double w1, double w2);

ValidatedConfig validate_config(const SystemConfig& cfg);
InternalConfig to_internal(const ValidatedConfig& cfg);
SystemConfig to_physical(const InternalConfig& cfg, const InternalUnits& units);

/// omega * coth(hbar omega / 2 k_B T) in internal units, with the T -> 0 and omega -> 0 limits.
double omega_coth(double omega, double thermal_energy);

}  // namespace cqbm
