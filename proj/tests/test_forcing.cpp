#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>

#include "cqbm/forcing.hpp"

using namespace cqbm;
using C = std::complex<double>;

namespace {

ForceSpec step(double amp, double onset, double decay) {
    ForceSpec f;
    f.kind = ForceKind::exponential_step;
    f.amplitude = amp;
    f.onset = onset;
    f.decay = decay;
    return f;
}

ForceSpec sampled() {
    ForceSpec f;
    f.kind = ForceKind::sampled;
    f.sample_step = 0.4;
    f.samples = {0.0, 1.0, -0.5, 0.25, 2.0, 0.0};
    return f;
}

// Independent moment: adaptive Gauss-Kronrod on each smooth piece.
C moment_gk(const ForceSpec& f, double t, C z, std::vector<double> cuts) {
    cuts.insert(cuts.begin(), 0.0);
    cuts.push_back(t);
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] <= cuts[i]) continue;
        re += GK::integrate([&](double s) { return (force_value(f, s) * std::exp(z * s)).real(); }, cuts[i], cuts[i + 1], 15, 1e-14);
        im += GK::integrate([&](double s) { return (force_value(f, s) * std::exp(z * s)).imag(); }, cuts[i], cuts[i + 1], 15, 1e-14);
    }
    return {re, im};
}

}  // namespace

TEST(Forcing, StepValues) {
    const auto f = step(2.0, 1.0, 0.1);
    EXPECT_EQ(force_value(f, 0.999), 0.0);
    EXPECT_DOUBLE_EQ(force_value(f, 1.0), 2.0 * std::exp(-0.1));
    EXPECT_DOUBLE_EQ(force_value(f, 5.0), 2.0 * std::exp(-0.5));
    EXPECT_EQ(force_value(ForceSpec{}, 3.0), 0.0);
}

TEST(Forcing, DefaultAmplitudeRule) {
    ForceSpec f = step(0.0, 10.0, 0.1);
    f.amplitude.reset();
    f.amplitude_sign = -1.0;
    // f(onset) = sign * decay * M omega0 sigma0
    const double a = default_amplitude(5.0, 3.0, 0.2, f);
    EXPECT_NEAR(a * std::exp(-0.1 * 10.0), -0.1 * 5.0 * 3.0 * 0.2, 1e-15);
}

TEST(Forcing, Breakpoints) {
    EXPECT_EQ(force_breakpoints(step(1.0, 2.0, 0.1), 5.0), std::vector<double>{2.0});
    EXPECT_TRUE(force_breakpoints(step(1.0, 2.0, 0.1), 1.0).empty());
    const auto b = force_breakpoints(sampled(), 1.0);
    EXPECT_EQ(b.size(), 2u);  // 0.4 and 0.8
}

TEST(Forcing, ExponentialMomentClosedForm) {
    const auto f = step(1.5, 1.0, 0.1);
    for (C z : {C(0.0, 0.0), C(-0.01, 3.0), C(0.01, -0.95), C(1e-9, 1e-9), C(0.3, 40.0)}) {
        for (double t : {0.5, 2.0, 17.3}) {
            const C a = force_exponential_moment(f, t, z);
            const C b = moment_gk(f, t, z, t > 1.0 ? std::vector<double>{1.0} : std::vector<double>{});
            EXPECT_LT(std::abs(a - b), 1e-12 * std::max(1.0, std::abs(b))) << "z = " << z << " t = " << t;
        }
    }
}

TEST(Forcing, SampledMomentClosedForm) {
    const auto f = sampled();
    for (C z : {C(0.0, 0.0), C(-0.01, 3.0), C(0.02, -8.0), C(1e-7, 0.0)}) {
        for (double t : {0.3, 1.1, 3.0}) {
            std::vector<double> cuts;
            for (double b = 0.4; b < t; b += 0.4) cuts.push_back(b);
            const C a = force_exponential_moment(f, t, z);
            const C b = moment_gk(f, t, z, cuts);
            EXPECT_LT(std::abs(a - b), 1e-12) << "z = " << z << " t = " << t;
        }
    }
}

TEST(Forcing, SpectrumIsMomentAtImaginaryArgument) {
    const auto f = step(1.0, 0.5, 0.2);
    const C a = force_spectrum(f, 4.0, 2.5);
    const C b = force_exponential_moment(f, 4.0, C(0.0, -2.5));
    EXPECT_LT(std::abs(a - b), 1e-15);
}
