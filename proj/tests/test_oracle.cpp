#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "cqbm/oracle.hpp"
#include "support.hpp"

using namespace cqbm;

namespace {

InternalConfig single(double thermal, double gamma) {
    InternalConfig c = test::internal("fig2");
    for (int k = 0; k < 2; ++k) {
        c.osc[k].gamma = gamma;
        c.bath[k].thermal_energy = thermal;
    }
    return c;
}

}  // namespace

TEST(Oracle, MeanOdeZeroForces) {
    const auto c = test::without_forces(test::internal("fig3"));
    const std::vector<double> times{0.0, 1.0, 5.0, 30.0};
    const auto m = oracle::mean_ode(c, times);
    ASSERT_EQ(m.t.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i)
        for (int k = 0; k < 2; ++k) {
            EXPECT_EQ(m.x[i][k], 0.0);
            EXPECT_EQ(m.p[i][k], 0.0);
        }
}

TEST(Oracle, MeanOdeMatchesDrivenOscillatorClosedForm) {
    // lambda = 0: x1 = f0 / (M Omega) Im[e^{(-g + i Omega) t} (e^{k t} - e^{k t0}) / k], k = g - d - i Omega.
    const auto c = test::internal("fig2");
    const auto& o = c.osc[0];
    const auto& f = c.force[0];
    const double Om = std::sqrt(o.omega0 * o.omega0 - o.gamma * o.gamma);
    const std::complex<double> kap(o.gamma - f.decay, -Om);
    std::vector<double> times;
    for (int i = 0; i <= 300; ++i) times.push_back(0.1 * i);
    const auto m = oracle::mean_ode(c, times);
    ASSERT_EQ(m.t.size(), times.size());
    double scale = 0.0, dev = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        double ref = 0.0;
        if (t > f.onset) {
            const auto z = std::exp(std::complex<double>(-o.gamma, Om) * t) * (std::exp(kap * t) - std::exp(kap * f.onset)) / kap;
            ref = *f.amplitude / (o.mass * Om) * z.imag();
        }
        scale = std::max(scale, std::abs(ref));
        dev = std::max(dev, std::abs(m.x[i][0] - ref));
        if (t < c.force[1].onset) {
            EXPECT_EQ(m.x[i][1], 0.0);
        }
    }
    EXPECT_LE(dev / scale, 1e-8);
}

TEST(Oracle, FdtHighTemperature) {
    // hbar w0 / k_B T = 0.25, classical equipartition with the quantum correction factor.
    const auto c = single(4.0, 0.01);
    const auto v = oracle::fdt_stationary_variance(c);
    const double theta = 0.25;
    const double ref = 4.0 / (c.osc[0].mass * c.osc[0].omega0 * c.osc[0].omega0) * (theta / 2) / std::tanh(theta / 2);
    EXPECT_LE(std::abs(v[0] / ref - 1.0), 0.01);
    EXPECT_EQ(v[2], 0.0);
}

TEST(Oracle, FdtGroundState) {
    const auto c = single(0.0, 0.01);
    const auto v = oracle::fdt_stationary_variance(c);
    EXPECT_LE(std::abs(v[0] / (1.0 / (2.0 * c.osc[0].mass * c.osc[0].omega0)) - 1.0), 0.02);
    EXPECT_LE(std::abs(v[1] / (1.0 / (2.0 * c.osc[1].mass * c.osc[1].omega0)) - 1.0), 0.02);
}

TEST(Oracle, FdtLabelSymmetry) {
    const auto c = test::internal("fig3");
    auto s = c;
    std::swap(s.osc[0], s.osc[1]);
    std::swap(s.bath[0], s.bath[1]);
    const auto a = oracle::fdt_stationary_variance(c), b = oracle::fdt_stationary_variance(s);
    EXPECT_NEAR(a[0], b[1], 1e-12 * a[0]);
    EXPECT_NEAR(a[1], b[0], 1e-12 * a[1]);
    EXPECT_NEAR(a[2], b[2], 1e-12 * std::abs(a[2]));
}

TEST(Oracle, GeneralCovarianceReducesToFdtAtEqualTemperatures) {
    const auto c = test::internal("fig3");
    const auto v = oracle::fdt_stationary_variance(c);
    const auto S = oracle::stationary_covariance(c);
    EXPECT_NEAR(S(0, 0), v[0], 1e-9 * v[0]);
    EXPECT_NEAR(S(1, 1), v[1], 1e-9 * v[1]);
    EXPECT_NEAR(S(0, 1), v[2], 1e-9 * std::abs(v[2]));
    // hotter second bath raises both variances
    const auto S4 = oracle::stationary_covariance(test::internal("fig4"));
    EXPECT_GT(S4(0, 0), S(0, 0));
    EXPECT_GT(S4(1, 1), S(1, 1));
}

TEST(Oracle, BruteDoubleIntegralAnalyticCases) {
    const auto one = [](double) { return 1.0; };
    EXPECT_NEAR(oracle::brute_double_integral(one, [](double) { return 2.5; }, one, 3.0, 64), 2.5 * 9.0 / 2.0, 1e-12);
    // sin(1.3 tau) cos(4.1 (tau - s)) sin(0.7 s) over 0 < s < tau < 2; 30-digit reference
    const double v = oracle::brute_double_integral([](double x) { return std::sin(1.3 * x); },
                                                   [](double u) { return std::cos(4.1 * u); },
                                                   [](double x) { return std::sin(0.7 * x); }, 2.0, 128);
    EXPECT_NEAR(v, 0.037499362970461209303, 1e-14);
    EXPECT_THROW(oracle::brute_double_integral(one, one, one, 1.0, 100), std::exception);
}
