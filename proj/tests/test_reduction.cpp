#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

#include "cqbm/error.hpp"
#include "cqbm/reduction.hpp"
#include "support.hpp"

using namespace cqbm;

namespace {

template <class F>
cplx integrate_line(F&& f, double a, double b) {
    using G = boost::math::quadrature::gauss<double, 100>;
    cplx s = 0.0;
    const int panels = 40;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double re = G::integrate([&](double x) { return f(x).real(); }, a + p * h, a + (p + 1) * h);
        const double im = G::integrate([&](double x) { return f(x).imag(); }, a + p * h, a + (p + 1) * h);
        s += cplx(re, im);
    }
    return s;
}

GaussianStateParams state_at(const char* name, double t, bool forces = true) {
    auto c = test::internal(name);
    if (!forces) c = test::without_forces(c);
    return Engine(c).evaluate(t).state;
}

}  // namespace

TEST(Reduction, IntegrateOutMatchesQuadrature) {
    QuadraticExponent e;
    e.variables = {"u", "v"};
    e.Q.resize(2, 2);
    e.Q << cplx(1.3, 0.2), cplx(0.4, -0.7), cplx(0.4, -0.7), cplx(2.1, 0.9);
    e.L.resize(2);
    e.L << cplx(0.3, -0.1), cplx(-0.2, 0.5);
    e.c = cplx(0.1, 0.3);
    const int idx[] = {1};
    const auto r = e.integrate_out(idx);
    ASSERT_EQ(r.variables, std::vector<std::string>{"u"});
    for (double u : {-1.0, 0.0, 0.7}) {
        const cplx num = integrate_line(
            [&](double v) {
                Eigen::VectorXd x(2);
                x << u, v;
                return std::exp(e.value(x));
            },
            -20.0, 20.0);
        Eigen::VectorXd x(1);
        x << u;
        EXPECT_LT(std::abs(std::exp(r.value(x)) - num), 1e-12 * std::abs(num));
    }
}

TEST(Reduction, NotNormalizable) {
    QuadraticExponent e;
    e.variables = {"u", "v"};
    e.Q = Eigen::MatrixXcd::Identity(2, 2);
    e.Q(1, 1) = -0.5;
    e.L = Eigen::VectorXcd::Zero(2);
    const int idx[] = {1};
    try {
        e.integrate_out(idx);
        FAIL();
    } catch (const Error& err) {
        EXPECT_EQ(err.code(), ErrorCode::not_normalizable);
    }
}

TEST(Reduction, InitialStateIsTheProductPacket) {
    const auto s = initial_state(0.5, 0.1, 1.0);
    EXPECT_NEAR(s.beta11(), 2.0, 1e-15);
    EXPECT_NEAR(s.beta22(), 10.0, 1e-15);
    // rho(x, y) = prod exp(-(x^2 + y^2) / 4 sigma^2) / sqrt(2 pi sigma^2)
    const double x1 = 0.3, x2 = -0.2, y1 = 0.1, y2 = 0.25;
    const double ref = std::exp(-(x1 * x1 + y1 * y1) / 2.0 - (x2 * x2 + y2 * y2) / 0.4) / (2 * M_PI * std::sqrt(0.05));
    EXPECT_NEAR(s.density(x1, x2, y1, y2).real(), ref, 1e-14);
    EXPECT_NEAR(std::abs(s.full_density(x1, x2, y1, y2) - s.density(x1, x2, y1, y2)), 0.0, 1e-14);
}

TEST(Reduction, UnitTrace) {
    for (const char* name : {"fig3", "fig4"})
        for (double t : {0.8, 12.0, 29.0}) {
            const auto s = state_at(name, t);
            const double det = s.det();
            const double m1 = 2.0 * (s.b_plus * s.beta12() - s.a_plus * s.beta22()) / det;
            const double m2 = 2.0 * (s.a_plus * s.beta12() - s.b_plus * s.beta11()) / det;
            const double w1 = 10.0 * std::sqrt(s.beta22() / det), w2 = 10.0 * std::sqrt(s.beta11() / det);
            const cplx tr = integrate_line(
                [&](double x1) {
                    return integrate_line([&](double x2) { return s.density(x1, x2, x1, x2); }, m2 - w2, m2 + w2);
                },
                m1 - w1, m1 + w1);
            EXPECT_NEAR(tr.real(), 1.0, 1e-6) << name << " t = " << t;
            EXPECT_NEAR(tr.imag(), 0.0, 1e-12);
        }
}

TEST(Reduction, HermiticityOfUntruncatedState) {
    for (double t : {0.8, 5.0, 12.0, 19.869934967483742, 29.0}) {
        const auto s = state_at("fig3", t);
        EXPECT_LE(hermiticity_residual(s), 1e-10) << t;
        EXPECT_LE(s.imag_residue, 1e-10);
    }
}

TEST(Reduction, ForceFreeLimit) {
    for (double t : {3.0, 17.0}) {
        const auto driven = state_at("fig3", t);
        const auto free = state_at("fig3", t, false);
        EXPECT_EQ(free.a_plus, 0.0);
        EXPECT_EQ(free.b_plus, 0.0);
        EXPECT_EQ(free.A_minus, 0.0);
        EXPECT_EQ(free.B_minus, 0.0);
        const double a[] = {driven.g1, driven.g12, driven.g2, driven.gp1, driven.gp12, driven.gp2,
                            driven.gpp11, driven.gpp12, driven.gpp21, driven.gpp22};
        const double b[] = {free.g1, free.g12, free.g2, free.gp1, free.gp12, free.gp2,
                            free.gpp11, free.gpp12, free.gpp21, free.gpp22};
        for (int i = 0; i < 10; ++i) EXPECT_LE(std::abs(a[i] - b[i]), 1e-12 * std::max(1.0, std::abs(b[i]))) << i;
    }
}

TEST(Reduction, PropagatorLayout) {
    ActionForm a;
    a.bilinear(0, 1) = 2.0;
    a.linear_xi[2] = 0.5;
    a.constant = 0.25;
    InfluenceForm g;
    g.quadratic(1, 1) = 3.0;
    const auto e = propagator_exponent(a, g, 1.0);
    EXPECT_EQ(e.Q(e.index_of("X_f1"), e.index_of("xi_f2")), cplx(0.0, -2.0));
    EXPECT_EQ(e.Q(e.index_of("xi_f2"), e.index_of("xi_f2")), cplx(6.0, 0.0));
    EXPECT_EQ(e.L[e.index_of("xi_i1")], cplx(0.0, 0.5));
    EXPECT_EQ(e.c, cplx(0.0, 0.25));
}
