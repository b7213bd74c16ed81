#include "cqbm/units.hpp"

#include <cmath>
#include <string>

#include "cqbm/error.hpp"

namespace cqbm {
namespace {

void require(bool ok, ErrorCode code, const std::string& what) {
    if (!ok) throw Error(code, what);
}

void check_oscillator(const OscillatorParams& o, const char* name) {
    const std::string n(name);
    require(o.mass > 0.0 && std::isfinite(o.mass), ErrorCode::invalid_config, n + ".mass must be positive");
    require(o.eigenfrequency > 0.0 && std::isfinite(o.eigenfrequency), ErrorCode::invalid_config,
            n + ".eigenfrequency must be positive");
    require(o.damping_rate >= 0.0 && std::isfinite(o.damping_rate), ErrorCode::invalid_config,
            n + ".damping_rate must be non-negative");
    if (o.initial_variance)
        require(*o.initial_variance > 0.0, ErrorCode::invalid_config, n + ".initial_variance must be positive");
}

void check_bath(const BathParams& b, const char* name) {
    const std::string n(name);
    require(b.temperature >= 0.0 && std::isfinite(b.temperature), ErrorCode::invalid_config,
            n + ".temperature must be non-negative");
    require(b.cutoff > 0.0 && std::isfinite(b.cutoff), ErrorCode::invalid_config, n + ".cutoff must be positive");
}

void check_force(const ForceSpec& f, const char* name) {
    const std::string n(name);
    if (f.kind == ForceKind::exponential_step) {
        require(f.decay >= 0.0, ErrorCode::invalid_config, n + ".decay must be non-negative");
        require(f.amplitude || f.decay > 0.0, ErrorCode::invalid_config,
                n + ": default amplitude needs a positive decay");
    } else if (f.kind == ForceKind::sampled) {
        require(f.sample_step > 0.0 && f.samples.size() >= 2, ErrorCode::invalid_config,
                n + ": sampled force needs a positive step and two samples");
    }
}

ForceSpec rescale_force(const ForceSpec& f, double time, double force) {
    ForceSpec out = f;
    out.onset = f.onset / time;
    out.decay = f.decay * time;
    out.sample_step = f.sample_step / time;
    if (f.amplitude) out.amplitude = *f.amplitude / force;
    for (double& v : out.samples) v /= force;
    return out;
}

}  // namespace

InternalUnits InternalUnits::from(double mass1, double omega01) {
    InternalUnits u;
    u.time = 1.0 / omega01;
    u.frequency = omega01;
    u.mass = mass1;
    u.length = std::sqrt(hbar_cgs / (mass1 * omega01));
    u.action = hbar_cgs;
    u.energy = hbar_cgs * omega01;
    u.momentum = hbar_cgs / u.length;
    u.force = u.energy / u.length;
    u.temperature = hbar_cgs * omega01 / boltzmann_cgs;
    return u;
}

std::vector<double> InternalConfig::grid() const {
    std::vector<double> g(n_points);
    for (int i = 0; i < n_points; ++i) g[i] = t_end * i / (n_points - 1);
    return g;
}

double physical_coupling(double dimensionless, double m1, double m2, double w1, double w2) {
    return dimensionless * w1 * w2 * std::sqrt(m1 * m2);
}

ValidatedConfig validate_config(const SystemConfig& cfg) {
    check_oscillator(cfg.osc1, "osc1");
    check_oscillator(cfg.osc2, "osc2");
    check_bath(cfg.bath1, "bath1");
    check_bath(cfg.bath2, "bath2");
    check_force(cfg.force1, "force1");
    check_force(cfg.force2, "force2");
    require(cfg.time_grid.n_points >= 2, ErrorCode::invalid_config, "time_grid.n_points must be at least 2");
    require(cfg.time_grid.t_end > 0.0, ErrorCode::invalid_config, "time_grid.t_end must be positive");
    require(cfg.coupling_dimensionless >= 0.0, ErrorCode::invalid_config, "coupling must be non-negative");
    require(cfg.coupling_dimensionless < 1.0, ErrorCode::coupling_too_strong,
            "dimensionless coupling must be below 1");

    ValidatedConfig v;
    v.physical = cfg;
    const auto& o1 = cfg.osc1;
    const auto& o2 = cfg.osc2;
    v.coupling = physical_coupling(cfg.coupling_dimensionless, o1.mass, o2.mass, o1.eigenfrequency,
                                   o2.eigenfrequency);
    const double w1 = o1.eigenfrequency, w2 = o2.eigenfrequency;
    const double d = w1 * w1 * w2 * w2 - v.coupling * v.coupling / (o1.mass * o2.mass);
    require(d > 0.0, ErrorCode::coupling_too_strong, "coupled potential is not positive definite");
    v.units = InternalUnits::from(o1.mass, w1);
    return v;
}

InternalConfig to_internal(const ValidatedConfig& v) {
    const auto& u = v.units;
    const auto& p = v.physical;
    InternalConfig c;
    const OscillatorParams* osc[2] = {&p.osc1, &p.osc2};
    const BathParams* bath[2] = {&p.bath1, &p.bath2};
    const ForceSpec* force[2] = {&p.force1, &p.force2};
    for (int k = 0; k < 2; ++k) {
        auto& o = c.osc[k];
        o.mass = osc[k]->mass / u.mass;
        o.omega0 = osc[k]->eigenfrequency / u.frequency;
        o.gamma = osc[k]->damping_rate / u.frequency;
        o.sigma0_sq = osc[k]->initial_variance ? *osc[k]->initial_variance / (u.length * u.length)
                                               : 1.0 / (2.0 * o.mass * o.omega0);
        c.bath[k].thermal_energy = bath[k]->temperature / u.temperature;
        c.bath[k].cutoff = bath[k]->cutoff / u.frequency;
        c.force[k] = rescale_force(*force[k], u.time, u.force);
        if (c.force[k].kind == ForceKind::exponential_step && !c.force[k].amplitude)
            c.force[k].amplitude = default_amplitude(o.mass, o.omega0, std::sqrt(o.sigma0_sq), c.force[k]);
    }
    c.coupling = v.coupling / (u.mass * u.frequency * u.frequency);
    c.t_end = p.time_grid.t_end / u.time;
    c.n_points = p.time_grid.n_points;
    c.hbar = 1.0;
    return c;
}

SystemConfig to_physical(const InternalConfig& c, const InternalUnits& u) {
    SystemConfig p;
    OscillatorParams* osc[2] = {&p.osc1, &p.osc2};
    BathParams* bath[2] = {&p.bath1, &p.bath2};
    ForceSpec* force[2] = {&p.force1, &p.force2};
    for (int k = 0; k < 2; ++k) {
        osc[k]->mass = c.osc[k].mass * u.mass;
        osc[k]->eigenfrequency = c.osc[k].omega0 * u.frequency;
        osc[k]->damping_rate = c.osc[k].gamma * u.frequency;
        osc[k]->initial_variance = c.osc[k].sigma0_sq * u.length * u.length;
        bath[k]->temperature = c.bath[k].thermal_energy * u.temperature;
        bath[k]->cutoff = c.bath[k].cutoff * u.frequency;
        *force[k] = rescale_force(c.force[k], 1.0 / u.time, 1.0 / u.force);
    }
    const double w1 = p.osc1.eigenfrequency, w2 = p.osc2.eigenfrequency;
    const double lambda = c.coupling * u.mass * u.frequency * u.frequency;
    p.coupling_dimensionless = lambda / (w1 * w2 * std::sqrt(p.osc1.mass * p.osc2.mass));
    p.time_grid = {c.t_end * u.time, c.n_points};
    return p;
}

double omega_coth(double omega, double thermal_energy) {
    const double w = std::abs(omega);
    if (thermal_energy <= 0.0) return w;
    const double theta = w / (2.0 * thermal_energy);
    if (theta < 1e-4) return 2.0 * thermal_energy + w * theta / 3.0;
    return w / std::tanh(theta);
}

}  // namespace cqbm
