#include "cqbm/forcing.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "cqbm/error.hpp"

namespace cqbm {
namespace {

using cplx = std::complex<double>;

// exp(w) - 1 without cancellation.
cplx expm1c(cplx w) {
    const double a = w.real(), b = w.imag();
    const double s = std::sin(0.5 * b);
    return {std::expm1(a) * std::cos(b) - 2.0 * s * s, std::exp(a) * std::sin(b)};
}

// (exp(w) - 1) / w
cplx phi1(cplx w) {
    if (std::abs(w) < 0.5) {
        cplx term = 1.0, sum = 1.0;
        for (int k = 1; k < 25; ++k) {
            term *= w / double(k + 1);
            sum += term;
        }
        return sum;
    }
    return expm1c(w) / w;
}

// (exp(w) - 1 - w) / w^2
cplx phi2(cplx w) {
    if (std::abs(w) < 0.5) {
        cplx term = 0.5, sum = 0.5;
        for (int k = 1; k < 25; ++k) {
            term *= w / double(k + 2);
            sum += term;
        }
        return sum;
    }
    return (expm1c(w) - w) / (w * w);
}

double sample_at(const ForceSpec& f, std::size_t k) { return k < f.samples.size() ? f.samples[k] : 0.0; }

}  // namespace

double force_value(const ForceSpec& f, double tau) {
    switch (f.kind) {
        case ForceKind::zero:
            return 0.0;
        case ForceKind::exponential_step:
            return tau < f.onset ? 0.0 : f.amplitude.value_or(0.0) * std::exp(-f.decay * tau);
        case ForceKind::sampled: {
            if (f.samples.empty() || tau < 0.0) return 0.0;
            const double u = tau / f.sample_step;
            const auto k = static_cast<std::size_t>(std::floor(u));
            if (k + 1 >= f.samples.size()) return k + 1 == f.samples.size() && u == double(k) ? f.samples[k] : 0.0;
            const double frac = u - double(k);
            return f.samples[k] + frac * (f.samples[k + 1] - f.samples[k]);
        }
    }
    return 0.0;
}

double default_amplitude(double mass, double omega0, double sigma0, const ForceSpec& f) {
    if (!(f.decay > 0.0)) throw Error(ErrorCode::invalid_config, "default amplitude needs a positive decay rate");
    return f.amplitude_sign * f.decay * std::exp(f.decay * f.onset) * mass * omega0 * sigma0;
}

std::vector<double> force_breakpoints(const ForceSpec& f, double t) {
    std::vector<double> out;
    if (f.kind == ForceKind::exponential_step) {
        if (f.onset > 0.0 && f.onset < t) out.push_back(f.onset);
    } else if (f.kind == ForceKind::sampled) {
        for (std::size_t k = 1; k < f.samples.size(); ++k) {
            const double s = k * f.sample_step;
            if (s >= t) break;
            out.push_back(s);
        }
    }
    return out;
}

std::complex<double> force_exponential_moment(const ForceSpec& f, double t, std::complex<double> z) {
    switch (f.kind) {
        case ForceKind::zero:
            return 0.0;
        case ForceKind::exponential_step: {
            if (t <= f.onset) return 0.0;
            const double a = std::max(f.onset, 0.0);
            const cplx u = z - f.decay;
            const double len = t - a;
            return f.amplitude.value_or(0.0) * std::exp(u * a) * len * phi1(u * len);
        }
        case ForceKind::sampled: {
            cplx sum = 0.0;
            const double h = f.sample_step;
            for (std::size_t k = 0; k + 1 < f.samples.size(); ++k) {
                const double a = k * h;
                if (a >= t) break;
                const double len = std::min(h, t - a);
                const double alpha = sample_at(f, k);
                const double beta = (sample_at(f, k + 1) - alpha) / h;
                const cplx w = z * len;
                const cplx p1 = phi1(w);
                sum += std::exp(z * a) * (alpha * len * p1 + beta * len * len * (p1 - phi2(w)));
            }
            return sum;
        }
    }
    return 0.0;
}

std::complex<double> force_spectrum(const ForceSpec& f, double t, double omega) {
    return force_exponential_moment(f, t, cplx(0.0, -omega));
}

ForceSpec load_sampled_force(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io, "cannot open force samples " + path.string());
    std::vector<double> times, values;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        for (char& c : line)
            if (c == ',' || c == ';' || c == '\t') c = ' ';
        std::istringstream ss(line);
        double tv, fv;
        if (!(ss >> tv >> fv)) {
            if (times.empty()) continue;  // header
            throw Error(ErrorCode::invalid_config, "malformed force sample line: " + line);
        }
        times.push_back(tv);
        values.push_back(fv);
    }
    if (times.size() < 2) throw Error(ErrorCode::invalid_config, "force samples need at least two rows");
    const double step = times[1] - times[0];
    if (!(step > 0.0) || std::abs(times[0]) > 1e-9 * step)
        throw Error(ErrorCode::invalid_config, "force samples must start at 0 with increasing times");
    for (std::size_t k = 1; k < times.size(); ++k)
        if (std::abs(times[k] - times[0] - k * step) > 1e-6 * step)
            throw Error(ErrorCode::invalid_config, "force samples must lie on a uniform grid");
    ForceSpec f;
    f.kind = ForceKind::sampled;
    f.sample_step = step;
    f.samples = std::move(values);
    return f;
}

}  // namespace cqbm
