#pragma once

#include <Eigen/Dense>
#include <array>
#include <memory>
#include <vector>

#include "cqbm/modes.hpp"
#include "cqbm/particular.hpp"

namespace cqbm {

/// K(s) = (2 M gamma / hbar pi) int_0^cutoff w coth(hbar w / 2 k_B T) cos(w s) dw.
class NoiseKernel {
public:
    NoiseKernel(double mass, double gamma, double thermal_energy, double cutoff, double hbar = 1.0);

    /// Integrand weight (2 M gamma / hbar pi) w coth(hbar w / 2 k_B T).
    double spectral_weight(double omega) const;
    /// Direct Clenshaw-Curtis evaluation at lag s.
    double operator()(double s) const;

    double cutoff() const { return cutoff_; }
    double thermal_energy() const { return thermal_; }

    /// Samples at s = k * table_step() over [0, t] (empty unless built by noise_kernel()).
    const std::vector<double>& table() const { return table_; }
    double table_step() const { return step_; }
    void tabulate(double t);

private:
    const std::vector<double>& weights_at(int level) const;

    double prefactor_, thermal_, cutoff_, hbar_;
    std::vector<double> table_;
    double step_ = 0.0;
    struct Cache;
    std::shared_ptr<Cache> cache_;
};

NoiseKernel make_noise_kernel(const InternalConfig& cfg, int bath);
/// Kernel of bath `bath` with its table over [0, t] (spacing <= pi / (8 cutoff)).
NoiseKernel noise_kernel(const InternalConfig& cfg, int bath, double t);

/// Bath phase phi = xi^T quadratic xi (+ cross_linear . xi + constant when force terms are on),
/// over (xi_f1, xi_f2, xi_i1, xi_i2). The propagator carries exp(-phi).
struct InfluenceForm {
    Eigen::Matrix4d quadratic = Eigen::Matrix4d::Zero();
    bool has_force_terms = false;
    Eigen::Vector4d cross_linear = Eigen::Vector4d::Zero();  // diagnostic, not part of the propagator
    double constant = 0.0;

    // Published coefficient names (hbar times these with hbar = 1).
    double A(int k) const { return quadratic(k, k); }
    double B(int k) const { return 2.0 * quadratic(k, k + 2); }
    double C(int k) const { return quadratic(k + 2, k + 2); }
    /// E1 xi_i1 xi_i2, E2 xi_f2 xi_i1, E3 xi_f1 xi_i2, E4 xi_f1 xi_f2.
    double E(int j) const;

    double evaluate(const Eigen::Vector4d& xi) const;
};

struct InfluenceOptions {
    bool force_terms = false;
    double rel_tol = 1e-11;
};

InfluenceForm influence_form(const InternalConfig& cfg, const NormalModes& modes, const ParticularSolution& partic,
                             const std::array<NoiseKernel, 2>& kernels, double t, const InfluenceOptions& opts = {});

}  // namespace cqbm
