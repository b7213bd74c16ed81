#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "cqbm/modes.hpp"
#include "cqbm/particular.hpp"

namespace cqbm {

/// Endpoint order in both halves: (f1, f2, i1, i2).
struct EndpointVector {
    std::array<double, 4> X{};
    std::array<double, 4> xi{};
};

/// S = X^T bilinear xi + linear_X . X + linear_xi . xi + constant.
struct ActionForm {
    Eigen::Matrix4d bilinear = Eigen::Matrix4d::Zero();  // rows X, columns xi
    Eigen::Vector4d linear_X = Eigen::Vector4d::Zero();
    Eigen::Vector4d linear_xi = Eigen::Vector4d::Zero();
    double constant = 0.0;
    double refinement_change = -1.0;  // relative change under panel doubling, if measured
    // Bilinear and X-linear slots come from the on-shell boundary form; this is their largest
    // deviation from direct Lagrangian quadrature (relative to the bilinear and xi-linear scales).
    double quadrature_deviation = 0.0;

    double evaluate(const EndpointVector& e) const;
};

struct PathSample {
    std::array<double, 2> X{}, X_rate{}, xi{}, xi_rate{};
};

/// Lagrangian in sum/difference variables at one instant.
double lagrangian_value(const InternalConfig& cfg, const PathSample& p, std::array<double, 2> force);

/// Action integrated along the classical paths with the given endpoints.
double classical_action(const InternalConfig& cfg, const NormalModes& modes, const ParticularSolution& partic,
                        const EndpointVector& e, double t);

struct ActionOptions {
    bool verify_refinement = false;
};

ActionForm classical_action_form(const InternalConfig& cfg, const NormalModes& modes,
                                 const ParticularSolution& partic, double t, const ActionOptions& opts = {});

struct ActionSlot {
    std::string slot;   // e.g. "X_f1*xi_f1"
    std::string alias;  // position in the published decomposition, e.g. "D1+Pi1"
    double value = 0.0;
};

std::vector<ActionSlot> labeled_slots(const ActionForm& form);

}  // namespace cqbm
