#include "cqbm/numerics/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace cqbm::numerics {
namespace {

Rule make_gauss_legendre(int n) {
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        r.nodes[i] = -z;
        r.nodes[n - 1 - i] = z;
        r.weights[i] = r.weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
    return r;
}

Rule make_clenshaw_curtis(int n) {
    Rule r;
    r.nodes.resize(n + 1);
    r.weights.resize(n + 1);
    for (int j = 0; j <= n; ++j) {
        r.nodes[j] = -std::cos(std::numbers::pi * j / n);
        double s = 1.0;
        for (int k = 1; k <= n / 2; ++k) {
            const double b = (2 * k == n) ? 1.0 : 2.0;
            s -= b / (4.0 * k * k - 1.0) * std::cos(2.0 * k * j * std::numbers::pi / n);
        }
        const double c = (j == 0 || j == n) ? 1.0 : 2.0;
        r.weights[j] = c * s / n;
    }
    return r;
}

template <class Make>
const Rule& cached(std::map<int, std::unique_ptr<Rule>>& cache, std::mutex& mu, int n, Make make) {
    std::lock_guard lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<Rule>(make(n));
    return *slot;
}

// S(j, k) = integral from -1 to x_j of the k-th Lagrange basis polynomial.
const std::vector<double>& integration_matrix(int n) {
    static std::mutex mu;
    static std::map<int, std::vector<double>> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    const Rule& r = gauss_legendre(n);
    auto legendre = [n](double x) {
        std::vector<double> p(n + 1);
        p[0] = 1.0;
        if (n >= 1) p[1] = x;
        for (int k = 1; k < n; ++k) p[k + 1] = ((2.0 * k + 1.0) * x * p[k] - k * p[k - 1]) / (k + 1.0);
        return p;
    };
    std::vector<std::vector<double>> at_nodes(n);
    for (int k = 0; k < n; ++k) at_nodes[k] = legendre(r.nodes[k]);

    std::vector<double> s(static_cast<std::size_t>(n) * n, 0.0);
    for (int j = 0; j < n; ++j) {
        const auto pj = legendre(r.nodes[j]);
        std::vector<double> antideriv(n);
        antideriv[0] = r.nodes[j] + 1.0;
        for (int m = 1; m < n; ++m) antideriv[m] = (pj[m + 1] - pj[m - 1]) / (2.0 * m + 1.0);
        for (int k = 0; k < n; ++k) {
            double v = 0.0;
            for (int m = 0; m < n; ++m) v += (2.0 * m + 1.0) / 2.0 * at_nodes[k][m] * antideriv[m];
            s[static_cast<std::size_t>(j) * n + k] = r.weights[k] * v;
        }
    }
    return cache.emplace(n, std::move(s)).first->second;
}

}  // namespace

const Rule& gauss_legendre(int n) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<Rule>> cache;
    return cached(cache, mu, n, make_gauss_legendre);
}

const Rule& clenshaw_curtis(int n) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<Rule>> cache;
    return cached(cache, mu, n, make_clenshaw_curtis);
}

CompositeRule::CompositeRule(double a, double b, std::vector<double> breakpoints,
                             double max_width, int min_panels, int order)
    : a_(a), b_(b), order_(order) {
    if (!(b > a)) throw std::invalid_argument("CompositeRule: empty interval");
    max_width_ = std::min(max_width, (b - a) / std::max(1, min_panels));

    std::vector<double> cuts{a};
    std::sort(breakpoints.begin(), breakpoints.end());
    for (double p : breakpoints)
        if (p > a && p < b && p - cuts.back() > 1e-14 * (b - a)) cuts.push_back(p);
    if (b - cuts.back() <= 1e-14 * (b - a)) cuts.pop_back();
    cuts.push_back(b);

    edges_.push_back(a);
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double len = cuts[s + 1] - cuts[s];
        const int n = std::max(1, static_cast<int>(std::ceil(len / max_width_ - 1e-12)));
        for (int k = 1; k <= n; ++k) edges_.push_back(k == n ? cuts[s + 1] : cuts[s] + len * k / n);
    }

    const Rule& g = gauss_legendre(order_);
    nodes_.reserve((edges_.size() - 1) * order_);
    weights_.reserve(nodes_.capacity());
    for (std::size_t p = 0; p + 1 < edges_.size(); ++p) {
        const double h = 0.5 * (edges_[p + 1] - edges_[p]), m = 0.5 * (edges_[p + 1] + edges_[p]);
        for (int i = 0; i < order_; ++i) {
            nodes_.push_back(m + h * g.nodes[i]);
            weights_.push_back(h * g.weights[i]);
        }
    }
}

CompositeRule CompositeRule::refined() const {
    std::vector<double> inner(edges_.begin() + 1, edges_.end() - 1);
    for (std::size_t p = 0; p + 1 < edges_.size(); ++p) inner.push_back(0.5 * (edges_[p] + edges_[p + 1]));
    return CompositeRule(a_, b_, std::move(inner), max_width_, 1, order_);
}

std::vector<double> CompositeRule::cumulative(std::span<const double> values) const {
    if (values.size() != nodes_.size()) throw std::invalid_argument("CompositeRule::cumulative: size mismatch");
    const auto& s = integration_matrix(order_);
    std::vector<double> out(values.size());
    double base = 0.0;
    for (std::size_t p = 0; p + 1 < edges_.size(); ++p) {
        const double h = 0.5 * (edges_[p + 1] - edges_[p]);
        const double* f = values.data() + p * order_;
        double total = 0.0;
        for (int j = 0; j < order_; ++j) {
            double v = 0.0;
            for (int k = 0; k < order_; ++k) v += s[static_cast<std::size_t>(j) * order_ + k] * f[k];
            out[p * order_ + j] = base + h * v;
            total += weights_[p * order_ + j] * f[j];
        }
        base += total;
    }
    return out;
}

}  // namespace cqbm::numerics
