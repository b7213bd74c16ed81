#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "cqbm/numerics/adaptive.hpp"
#include "cqbm/numerics/quadrature.hpp"

using namespace cqbm::numerics;

TEST(GaussLegendre, MatchesBoostTables) {
    const Rule& r = gauss_legendre(20);
    using B = boost::math::quadrature::gauss<double, 20>;
    // Boost stores the positive half starting at the centre; our nodes are ascending.
    for (int i = 0; i < 10; ++i) {
        EXPECT_NEAR(r.nodes[10 + i], B::abscissa()[i], 1e-15);
        EXPECT_NEAR(r.weights[10 + i], B::weights()[i], 1e-15);
        EXPECT_NEAR(r.nodes[9 - i], -B::abscissa()[i], 1e-15);
    }
}

TEST(GaussLegendre, ExactForOddDegreeLimit) {
    for (int n : {4, 16, 64}) {
        const int p = 2 * n - 2;
        const double exact = 2.0 / (p + 1);
        EXPECT_NEAR(gauss_integrate([&](double x) { return std::pow(x, p); }, -1.0, 1.0, n), exact, 1e-13);
    }
}

TEST(ClenshawCurtis, NodesAndSmoothIntegral) {
    const Rule& r = clenshaw_curtis(32);
    ASSERT_EQ(r.nodes.size(), 33u);
    EXPECT_NEAR(r.nodes.front(), -1.0, 1e-15);
    EXPECT_NEAR(r.nodes[16], 0.0, 1e-15);
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::exp(r.nodes[i]);
    EXPECT_NEAR(s, std::exp(1.0) - std::exp(-1.0), 1e-14);
}

TEST(CompositeRule, PanelsRespectBreakpoints) {
    CompositeRule rule(0.0, 10.0, {2.5, 7.0}, 1.0);
    const auto e = rule.edges();
    EXPECT_NE(std::find(e.begin(), e.end(), 2.5), e.end());
    EXPECT_NE(std::find(e.begin(), e.end(), 7.0), e.end());
    for (std::size_t i = 0; i + 1 < e.size(); ++i) EXPECT_LE(e[i + 1] - e[i], 1.0 + 1e-12);
    EXPECT_EQ(rule.refined().panel_count(), 2 * rule.panel_count());
    EXPECT_NEAR(rule.integrate([](double x) { return std::cos(3.0 * x); }), std::sin(30.0) / 3.0, 1e-13);
}

TEST(CompositeRule, CumulativeIntegralAtNodes) {
    CompositeRule rule(0.0, 6.0, {}, 0.5, 1, 16);
    std::vector<double> v;
    for (double x : rule.nodes()) v.push_back(std::cos(2.0 * x) * std::exp(-0.1 * x));
    const auto c = rule.cumulative(v);
    const auto nodes = rule.nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double x = nodes[i];
        // d/dx of e^{-0.1x}(2 sin 2x - 0.1 cos 2x) / 4.01
        const double exact = (std::exp(-0.1 * x) * (2.0 * std::sin(2.0 * x) - 0.1 * std::cos(2.0 * x)) + 0.1) / 4.01;
        EXPECT_NEAR(c[i], exact, 1e-13) << "x = " << x;
    }
}

TEST(Adaptive, VectorIntegrandAgainstBoost) {
    auto f = [](double x, std::span<double> out) {
        out[0] = std::exp(-x) * std::cos(20.0 * x);
        out[1] = 1.0 / (1.0 + x * x);
        out[2] = std::sqrt(x);
    };
    const double cuts[] = {0.0, 10.0};
    const auto r = integrate_adaptive(f, 3, cuts, {.rel_tol = 1e-12});
    ASSERT_TRUE(r.converged);
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double e0 = GK::integrate([](double x) { return std::exp(-x) * std::cos(20.0 * x); }, 0.0, 10.0, 20, 1e-14);
    EXPECT_NEAR(r.value[0], e0, 1e-13);
    EXPECT_NEAR(r.value[1], std::atan(10.0), 1e-12);
    EXPECT_NEAR(r.value[2], 2.0 / 3.0 * std::pow(10.0, 1.5), 1e-9);
}

TEST(Adaptive, ReferenceScaleControlsSmallComponents) {
    // The second component is tiny; against a shared reference it is converged almost at once.
    auto f = [](double x, std::span<double> out) {
        out[0] = std::cos(x);
        out[1] = 1e-12 * std::sin(50.0 * x);
    };
    const double cuts[] = {0.0, 3.0};
    const auto shared = integrate_adaptive(f, 2, cuts, {.rel_tol = 1e-10}, [](std::span<const double> tot, std::span<double> ref) {
        ref[0] = ref[1] = std::abs(tot[0]);
    });
    const auto own = integrate_adaptive(f, 2, cuts, {.rel_tol = 1e-10});
    EXPECT_TRUE(shared.converged);
    EXPECT_TRUE(own.converged);
    EXPECT_LE(shared.evaluations, own.evaluations);
    EXPECT_NEAR(own.value[1], 1e-12 * (1.0 - std::cos(150.0)) / 50.0, 1e-22);
}
