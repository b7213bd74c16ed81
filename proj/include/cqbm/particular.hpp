#pragma once

#include <array>
#include <span>
#include <vector>

#include "cqbm/modes.hpp"
#include "cqbm/numerics/quadrature.hpp"
#include "cqbm/units.hpp"

namespace cqbm {

/// Time rule shared by the particular solution and the action integral on [0, t]:
/// panels no wider than a quarter of the fastest mode period, split at force breakpoints.
numerics::CompositeRule time_rule(const InternalConfig& cfg, const NormalModes& modes, double t);

/// Driven anti-damped solution vanishing at tau = 0 and tau = t, built mode by mode
/// from the two-point Green's function.
class ParticularSolution {
public:
    ParticularSolution() = default;
    ParticularSolution(const InternalConfig& cfg, const NormalModes& modes, double t, numerics::CompositeRule rule);

    double duration() const { return t_; }
    bool trivial() const { return trivial_; }
    const numerics::CompositeRule& rule() const { return rule_; }

    std::array<double, 2> value(double tau) const;
    std::array<double, 2> rate(double tau) const;

    /// Values and rates at the rule's nodes.
    std::span<const std::array<double, 2>> node_values() const { return node_value_; }
    std::span<const std::array<double, 2>> node_rates() const { return node_rate_; }

    /// (xi_p1(0), xi_p2(0), xi_p1(t), xi_p2(t)) divided by scale().
    std::array<double, 4> boundary_residuals() const;
    /// Largest |xi_pk| over the rule nodes (1 if the solution vanishes).
    double scale() const;

private:
    struct Mode {
        double omega = 0, gamma = 0, denom = 0;  // denom = -Omega sin(Omega t)
        std::vector<double> lower;  // int_0^tau e^{-g s} sin(W s) g(s) ds at panel edges
        std::vector<double> upper;  // int_0^tau e^{-g s} sin(W (t - s)) g(s) ds at panel edges
    };

    double modal_force(int m, double s) const;
    std::array<double, 2> partial_integrals(int m, double tau) const;
    std::array<double, 2> combine(const std::array<double, 2>& q) const;

    double t_ = 0;
    bool trivial_ = true;
    std::array<ForceSpec, 2> force_;
    std::array<double, 2> mass_{};
    std::array<double, 2> ratio_{};
    std::array<Mode, 2> mode_;
    numerics::CompositeRule rule_;
    std::vector<std::array<double, 2>> node_value_, node_rate_;
};

ParticularSolution particular_solution(const InternalConfig& cfg, const NormalModes& modes, double t);

/// Independent frequency-domain construction: Fourier inversion of the driven response
/// to the force truncated to [0, t], followed by a homogeneous endpoint correction.
struct FourierRoute {
    std::vector<double> taus;
    std::vector<std::array<double, 2>> values;
    double tail_bound = 0.0;  // estimate of the truncated-window contribution
    bool converged = false;
};

FourierRoute fourier_route(const InternalConfig& cfg, const NormalModes& modes, double t,
                           std::span<const double> taus, double window_factor = 40.0);

/// Largest interior deviation between the two constructions relative to the solution scale.
/// Throws QuadratureNonConvergence above tol.
double verify_against_fourier(const ParticularSolution& p, const InternalConfig& cfg, const NormalModes& modes,
                              int n_interior = 41, double tol = 1e-6);

}  // namespace cqbm
