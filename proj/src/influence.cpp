#include "cqbm/influence.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "cqbm/error.hpp"
#include "cqbm/numerics/adaptive.hpp"

namespace cqbm {
namespace {

constexpr cplx I{0.0, 1.0};
constexpr int kLevels = 9;  // Clenshaw-Curtis sizes 64 .. 16384

int level_for(double phase) {
    const double need = 2.0 * phase + 64.0;
    int level = 0;
    while (level + 1 < kLevels && (64 << level) < need) ++level;
    return level;
}

// Integral over [0, t] of exp((s + i w) tau), reusing exp(s t) and exp(i w t).
cplx window_integral(cplx s, cplx est, cplx eiwt, double w, double t) {
    const cplx z = s + I * w;
    const cplx zt = z * t;
    if (std::abs(zt) < 0.5) return exp_integral(z, t);
    return (est * eiwt - 1.0) / z;
}

}  // namespace

struct NoiseKernel::Cache {
    std::array<std::once_flag, kLevels> once;
    std::array<std::vector<double>, kLevels> weighted;  // CC weight times spectral weight
    std::array<std::vector<double>, kLevels> omega;
};

NoiseKernel::NoiseKernel(double mass, double gamma, double thermal_energy, double cutoff, double hbar)
    : prefactor_(2.0 * mass * gamma / (hbar * std::numbers::pi)),
      thermal_(thermal_energy),
      cutoff_(cutoff),
      hbar_(hbar),
      cache_(std::make_shared<Cache>()) {
    if (!(cutoff > 0.0)) throw Error(ErrorCode::invalid_config, "bath cutoff must be positive");
}

double NoiseKernel::spectral_weight(double omega) const { return prefactor_ * omega_coth(omega, thermal_); }

const std::vector<double>& NoiseKernel::weights_at(int level) const {
    std::call_once(cache_->once[level], [&] {
        const int n = 64 << level;
        const auto& rule = numerics::clenshaw_curtis(n);
        auto& w = cache_->weighted[level];
        auto& om = cache_->omega[level];
        w.resize(n + 1);
        om.resize(n + 1);
        for (int j = 0; j <= n; ++j) {
            om[j] = 0.5 * cutoff_ * (rule.nodes[j] + 1.0);
            w[j] = 0.5 * cutoff_ * rule.weights[j] * spectral_weight(om[j]);
        }
    });
    return cache_->weighted[level];
}

double NoiseKernel::operator()(double s) const {
    const int level = level_for(cutoff_ * std::abs(s));
    const auto& w = weights_at(level);
    const auto& om = cache_->omega[level];
    double sum = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) sum += w[j] * std::cos(om[j] * s);
    return sum;
}

void NoiseKernel::tabulate(double t) {
    step_ = std::numbers::pi / (8.0 * cutoff_);
    const auto n = static_cast<std::size_t>(std::ceil(t / step_)) + 1;
    table_.resize(n);
    for (std::size_t k = 0; k < n; ++k) table_[k] = (*this)(k * step_);
}

NoiseKernel make_noise_kernel(const InternalConfig& cfg, int bath) {
    return NoiseKernel(cfg.osc[bath].mass, cfg.osc[bath].gamma, cfg.bath[bath].thermal_energy, cfg.bath[bath].cutoff,
                       cfg.hbar);
}

NoiseKernel noise_kernel(const InternalConfig& cfg, int bath, double t) {
    NoiseKernel k = make_noise_kernel(cfg, bath);
    k.tabulate(t);
    return k;
}

double InfluenceForm::E(int j) const {
    switch (j) {
        case 1: return 2.0 * quadratic(2, 3);
        case 2: return 2.0 * quadratic(1, 2);
        case 3: return 2.0 * quadratic(0, 3);
        case 4: return 2.0 * quadratic(0, 1);
    }
    return 0.0;
}

double InfluenceForm::evaluate(const Eigen::Vector4d& xi) const {
    double v = xi.dot(quadratic * xi);
    if (has_force_terms) v += cross_linear.dot(xi) + constant;
    return v;
}

InfluenceForm influence_form([[maybe_unused]] const InternalConfig& cfg, const NormalModes& modes, const ParticularSolution& partic,
                             const std::array<NoiseKernel, 2>& kernels, double t, const InfluenceOptions& opts) {
    check_caustic(modes, t);
    std::array<ModalPath, 4> basis;
    for (int j = 0; j < 4; ++j) {
        Endpoints e;
        if (j < 2)
            e.final[j] = 1.0;
        else
            e.initial[j - 2] = 1.0;
        basis[j] = homogeneous_path(modes, Sector::antidamped, e, t);
    }
    // All basis paths share the two mode exponents.
    const std::array<cplx, 4> expo{basis[0].exponent[0], std::conj(basis[0].exponent[0]), basis[0].exponent[1],
                                   std::conj(basis[0].exponent[1])};
    std::array<cplx, 4> est;
    for (int m = 0; m < 4; ++m) est[m] = std::exp(expo[m] * t);

    // Fine sampling of the particular solution for its spectrum (force terms only).
    std::vector<double> p_nodes, p_weights;
    std::vector<std::array<double, 2>> p_values;
    const bool force_terms = opts.force_terms && !partic.trivial();
    if (force_terms) {
        const double nu = std::max(kernels[0].cutoff(), kernels[1].cutoff());
        const auto& coarse = partic.rule();
        const auto edges = coarse.edges();
        std::vector<double> cuts(edges.begin() + 1, edges.end() - 1);
        numerics::CompositeRule fine(0.0, t, cuts, std::min(4.0 / nu, edges[1] - edges[0]), 1, 16);
        p_nodes.assign(fine.nodes().begin(), fine.nodes().end());
        p_weights.assign(fine.weights().begin(), fine.weights().end());
        for (double tau : p_nodes) p_values.push_back(partic.value(tau));
    }

    InfluenceForm form;
    form.has_force_terms = force_terms;
    const std::size_t n_pairs = 10;
    const std::size_t dim = force_terms ? n_pairs + 5 : n_pairs;
    static constexpr int pair_k[10] = {0, 0, 0, 0, 1, 1, 1, 2, 2, 3};
    static constexpr int pair_l[10] = {0, 1, 2, 3, 1, 2, 3, 2, 3, 3};

    for (int bath = 0; bath < 2; ++bath) {
        const NoiseKernel& kernel = kernels[bath];
        const double nu = kernel.cutoff();
        auto integrand = [&](double w, std::span<double> out) {
            const cplx eiwt = std::exp(I * w * t);
            std::array<cplx, 4> E;
            for (int m = 0; m < 4; ++m) E[m] = window_integral(expo[m], est[m], eiwt, w, t);
            std::array<cplx, 4> spec;
            for (int j = 0; j < 4; ++j) {
                const auto& a = basis[j].amplitude[bath];
                spec[j] = 0.5 * (a[0] * E[0] + std::conj(a[0]) * E[1] + a[1] * E[2] + std::conj(a[1]) * E[3]);
            }
            const double kw = kernel.spectral_weight(w);
            for (std::size_t p = 0; p < n_pairs; ++p)
                out[p] = 0.5 * kw * (spec[pair_k[p]] * std::conj(spec[pair_l[p]])).real();
            if (force_terms) {
                cplx sp = 0.0;
                for (std::size_t i = 0; i < p_nodes.size(); ++i)
                    sp += p_weights[i] * p_values[i][bath] * std::exp(I * w * p_nodes[i]);
                for (int j = 0; j < 4; ++j) out[n_pairs + j] = kw * (spec[j] * std::conj(sp)).real();
                out[n_pairs + 4] = 0.5 * kw * std::norm(sp);
            }
        };
        auto reference = [&](std::span<const double> total, std::span<double> ref) {
            std::array<double, 4> diag;
            for (int j = 0; j < 4; ++j) {
                // Diagonal entries of the pair list: (0,0) (1,1) (2,2) (3,3).
                static constexpr int at[4] = {0, 4, 7, 9};
                diag[j] = std::abs(total[at[j]]);
            }
            for (std::size_t p = 0; p < n_pairs; ++p) ref[p] = std::sqrt(diag[pair_k[p]] * diag[pair_l[p]]);
            if (force_terms) {
                const double cp = std::abs(total[n_pairs + 4]);
                for (int j = 0; j < 4; ++j) ref[n_pairs + j] = 2.0 * std::sqrt(diag[j] * cp);
                ref[n_pairs + 4] = cp;
            }
        };

        const double width = std::min(0.25, std::numbers::pi / t);
        std::vector<double> cuts;
        const int pieces = static_cast<int>(std::ceil(nu / width));
        for (int i = 0; i <= pieces; ++i) cuts.push_back(nu * i / pieces);
        numerics::AdaptiveOptions ao;
        ao.rel_tol = opts.rel_tol;
        const auto res = numerics::integrate_adaptive(integrand, dim, cuts, ao, reference);
        if (!res.converged)
            throw Error(ErrorCode::quadrature_non_convergence, "bath phase integral did not converge");
        for (std::size_t p = 0; p < n_pairs; ++p) {
            form.quadratic(pair_k[p], pair_l[p]) += res.value[p];
            if (pair_k[p] != pair_l[p]) form.quadratic(pair_l[p], pair_k[p]) += res.value[p];
        }
        if (force_terms) {
            for (int j = 0; j < 4; ++j) form.cross_linear[j] += res.value[n_pairs + j];
            form.constant += res.value[n_pairs + 4];
        }
    }
    return form;
}

}  // namespace cqbm
