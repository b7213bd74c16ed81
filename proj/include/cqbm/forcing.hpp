#pragma once

#include <complex>
#include <filesystem>
#include <optional>
#include <vector>

namespace cqbm {

enum class ForceKind { zero, exponential_step, sampled };

/// External force on one oscillator. Units follow whichever config holds it.
///
/// exponential_step: f(tau) = f0 * theta(tau - onset) * exp(-decay * tau).
/// sampled: linear interpolation of samples[k] at tau = k * sample_step, zero outside.
struct ForceSpec {
    ForceKind kind = ForceKind::zero;
    std::optional<double> amplitude;  // unset: the default amplitude rule applies
    double amplitude_sign = 1.0;      // multiplies the default amplitude
    double onset = 0.0;
    double decay = 0.0;
    double sample_step = 0.0;
    std::vector<double> samples;
};

double force_value(const ForceSpec& f, double tau);

/// f0 = decay * exp(decay * onset) * mass * omega0 * sigma0, times amplitude_sign.
double default_amplitude(double mass, double omega0, double sigma0, const ForceSpec& f);

/// Points in (0, t) where the force or its slope is discontinuous.
std::vector<double> force_breakpoints(const ForceSpec& f, double t);

/// Integral over [0, t] of f(s) exp(-i omega s), in closed form.
std::complex<double> force_spectrum(const ForceSpec& f, double t, double omega);

/// Integral over [0, t] of f(s) exp(z s), in closed form.
std::complex<double> force_exponential_moment(const ForceSpec& f, double t, std::complex<double> z);

/// Reads a two-column (time, value) CSV on a uniform grid starting at 0.
ForceSpec load_sampled_force(const std::filesystem::path& path);

}  // namespace cqbm
