#include "cqbm/action.hpp"

#include <algorithm>
#include <cmath>

namespace cqbm {
namespace {

Endpoints unit_endpoints(int slot) {
    Endpoints e;
    if (slot < 2)
        e.final[slot] = 1.0;
    else
        e.initial[slot - 2] = 1.0;
    return e;
}

Endpoints endpoints_of(const std::array<double, 4>& v) { return {{v[2], v[3]}, {v[0], v[1]}}; }

struct NodeSamples {
    std::vector<std::array<double, 2>> value, rate;
};

NodeSamples sample(const ModalPath& p, std::span<const double> nodes) {
    NodeSamples s;
    s.value.reserve(nodes.size());
    s.rate.reserve(nodes.size());
    for (double tau : nodes) {
        s.value.push_back(p.value(tau));
        s.rate.push_back(p.rate(tau));
    }
    return s;
}

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

double ActionForm::evaluate(const EndpointVector& e) const {
    const Eigen::Vector4d X(e.X.data()), xi(e.xi.data());
    return X.dot(bilinear * xi) + linear_X.dot(X) + linear_xi.dot(xi) + constant;
}

double lagrangian_value(const InternalConfig& cfg, const PathSample& p, std::array<double, 2> force) {
    double L = 0.0;
    for (int k = 0; k < 2; ++k) {
        const auto& o = cfg.osc[k];
        L += 0.5 * o.mass * p.X_rate[k] * p.xi_rate[k] - 0.5 * o.mass * o.omega0 * o.omega0 * p.X[k] * p.xi[k] -
             o.mass * o.gamma * p.X_rate[k] * p.xi[k] + p.xi[k] * force[k];
    }
    L += 0.5 * cfg.coupling * (p.X[0] * p.xi[1] + p.X[1] * p.xi[0]);
    return L;
}

double classical_action(const InternalConfig& cfg, const NormalModes& modes, const ParticularSolution& partic,
                        const EndpointVector& e, double t) {
    const ModalPath X = homogeneous_path(modes, Sector::damped, endpoints_of(e.X), t);
    const ModalPath xi = homogeneous_path(modes, Sector::antidamped, endpoints_of(e.xi), t);
    const auto& rule = partic.rule();
    const auto nodes = rule.nodes();
    const auto weights = rule.weights();
    const auto pv = partic.node_values();
    const auto pr = partic.node_rates();
    double S = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double tau = nodes[i];
        PathSample s{X.value(tau), X.rate(tau), xi.value(tau), xi.rate(tau)};
        for (int k = 0; k < 2; ++k) {
            s.xi[k] += pv[i][k];
            s.xi_rate[k] += pr[i][k];
        }
        S += weights[i] * lagrangian_value(cfg, s, {force_value(cfg.force[0], tau), force_value(cfg.force[1], tau)});
    }
    return S;
}

ActionForm classical_action_form(const InternalConfig& cfg, const NormalModes& modes,
                                 const ParticularSolution& partic, double t, const ActionOptions& opts) {
    const auto& rule = partic.rule();
    const auto nodes = rule.nodes();
    const auto weights = rule.weights();
    const auto pv = partic.node_values();
    const auto pr = partic.node_rates();
    const std::size_t n = nodes.size();

    std::array<NodeSamples, 4> X, xi;
    for (int j = 0; j < 4; ++j) {
        X[j] = sample(homogeneous_path(modes, Sector::damped, unit_endpoints(j), t), nodes);
        xi[j] = sample(homogeneous_path(modes, Sector::antidamped, unit_endpoints(j), t), nodes);
    }
    std::vector<std::array<double, 2>> force(n);
    for (std::size_t i = 0; i < n; ++i)
        force[i] = {force_value(cfg.force[0], nodes[i]), force_value(cfg.force[1], nodes[i])};
    constexpr std::array<double, 2> none{0.0, 0.0};

    ActionForm form;
    // On-shell the X-dependent part reduces to sum_k M_k / 2 [X_k' xi_k] between 0 and t,
    // which avoids the cancellation between path amplitudes ~ 1 / sin(Omega t) near caustics.
    const auto p0 = partic.value(0.0), pt = partic.value(t);
    Eigen::Matrix4d quad_bilinear;
    Eigen::Vector4d quad_linear_X;
    for (int j = 0; j < 4; ++j) {
        const ModalPath path = homogeneous_path(modes, Sector::damped, unit_endpoints(j), t);
        const auto r0 = path.rate(0.0), rt = path.rate(t);
        for (int m = 0; m < 2; ++m) {
            const double h = 0.5 * cfg.osc[m].mass;
            form.bilinear(j, m) = h * rt[m];
            form.bilinear(j, 2 + m) = -h * r0[m];
            form.linear_X[j] += h * (rt[m] * pt[m] - r0[m] * p0[m]);
        }
        for (int k = 0; k < 4; ++k) {
            double S = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const PathSample s{X[j].value[i], X[j].rate[i], xi[k].value[i], xi[k].rate[i]};
                S += weights[i] * lagrangian_value(cfg, s, none);
            }
            quad_bilinear(j, k) = S;
        }
    }

    // Constant: zero endpoints, forces on; the xi path is then the particular solution alone.
    for (std::size_t i = 0; i < n; ++i) {
        const PathSample s{none, none, pv[i], pr[i]};
        form.constant += weights[i] * lagrangian_value(cfg, s, force[i]);
    }
    // Linear terms: single unit endpoint with forces on, less the constant.
    for (int j = 0; j < 4; ++j) {
        double Sx = 0.0, Sxi = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const PathSample sx{X[j].value[i], X[j].rate[i], pv[i], pr[i]};
            Sx += weights[i] * lagrangian_value(cfg, sx, force[i]);
            const PathSample sxi{none,
                                 none,
                                 {xi[j].value[i][0] + pv[i][0], xi[j].value[i][1] + pv[i][1]},
                                 {xi[j].rate[i][0] + pr[i][0], xi[j].rate[i][1] + pr[i][1]}};
            Sxi += weights[i] * lagrangian_value(cfg, sxi, force[i]);
        }
        quad_linear_X[j] = Sx - form.constant;
        form.linear_xi[j] = Sxi - form.constant;
    }
    form.quadrature_deviation = max_abs(quad_bilinear - form.bilinear) / std::max(max_abs(form.bilinear), 1e-300);
    const double lin_scale = std::max(form.linear_xi.cwiseAbs().maxCoeff(), 1e-300);
    form.quadrature_deviation = std::max(form.quadrature_deviation, max_abs(quad_linear_X - form.linear_X) / lin_scale);

    if (opts.verify_refinement) {
        const ParticularSolution fine(cfg, modes, t, rule.refined());
        const ActionForm f2 = classical_action_form(cfg, modes, fine, t);
        double change = max_abs(f2.bilinear - form.bilinear) / std::max(max_abs(form.bilinear), 1e-300);
        const double lin_scale = std::max(form.linear_xi.cwiseAbs().maxCoeff(), form.linear_X.cwiseAbs().maxCoeff());
        if (lin_scale > 0.0) {
            change = std::max(change, max_abs(f2.linear_xi - form.linear_xi) / lin_scale);
            change = std::max(change, max_abs(f2.linear_X - form.linear_X) / lin_scale);
        }
        form.refinement_change = change;
    }
    return form;
}

std::vector<ActionSlot> labeled_slots(const ActionForm& form) {
    static const char* X_names[4] = {"X_f1", "X_f2", "X_i1", "X_i2"};
    static const char* xi_names[4] = {"xi_f1", "xi_f2", "xi_i1", "xi_i2"};
    // Position of each product in the published bilinear decomposition.
    static const char* alias[4][4] = {
        {"D1+Pi1", "D6+D'6+Pi2", "D3+Pi5", "D9+D'9+Pi6"},
        {"D5+D'5+Pi3", "D'1+Pi4", "D10+D'10+Pi7", "D'3+Pi8"},
        {"D2+Pi9", "D7+D'7+Pi10", "D4+Pi13", "D11+D'11+Pi14"},
        {"D8+D'8+Pi11", "D'2+Pi12", "D12+D'12+Pi15", "D'4+Pi16"},
    };
    std::vector<ActionSlot> out;
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
            out.push_back({std::string(X_names[j]) + "*" + xi_names[k], alias[j][k], form.bilinear(j, k)});
    static const char* lin_X_alias[4] = {"(none)", "(none)", "U1", "U2"};
    static const char* lin_xi_alias[4] = {"Phi_f1", "Phi_f2", "Lambda1", "Lambda2"};
    for (int j = 0; j < 4; ++j) out.push_back({X_names[j], lin_X_alias[j], form.linear_X[j]});
    for (int j = 0; j < 4; ++j) out.push_back({xi_names[j], lin_xi_alias[j], form.linear_xi[j]});
    out.push_back({"constant", "U01+force", form.constant});
    return out;
}

}  // namespace cqbm
