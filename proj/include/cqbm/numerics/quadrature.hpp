#pragma once

#include <span>
#include <vector>

namespace cqbm::numerics {

/// Nodes and weights on [-1, 1].
struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Cached Gauss-Legendre rule with n points.
const Rule& gauss_legendre(int n);

/// Clenshaw-Curtis rule with n + 1 Chebyshev extreme points (cached).
const Rule& clenshaw_curtis(int n);

/// Composite Gauss-Legendre rule on [a, b]. Panels never straddle a breakpoint.
class CompositeRule {
public:
    CompositeRule() = default;
    CompositeRule(double a, double b, std::vector<double> breakpoints, double max_width,
                  int min_panels = 1, int order = 16);

    double lower() const { return a_; }
    double upper() const { return b_; }
    int order() const { return order_; }
    std::size_t size() const { return nodes_.size(); }
    std::size_t panel_count() const { return edges_.empty() ? 0 : edges_.size() - 1; }
    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> weights() const { return weights_; }
    std::span<const double> edges() const { return edges_; }

    /// Same panel layout with each panel split in two.
    CompositeRule refined() const;

    template <class F>
    double integrate(F&& f) const {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * f(nodes_[i]);
        return s;
    }

    /// Running integral from a to each node, given integrand samples at the nodes.
    std::vector<double> cumulative(std::span<const double> values) const;

private:
    double a_ = 0.0, b_ = 0.0;
    int order_ = 16;
    double max_width_ = 0.0;
    std::vector<double> edges_, nodes_, weights_;
};

/// Integral of f over [a, b] with a fixed n-point Gauss-Legendre rule.
template <class F>
double gauss_integrate(F&& f, double a, double b, int n = 16) {
    const Rule& r = gauss_legendre(n);
    const double h = 0.5 * (b - a), m = 0.5 * (a + b);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += r.weights[i] * f(m + h * r.nodes[i]);
    return h * s;
}

}  // namespace cqbm::numerics
