#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "cqbm/influence.hpp"
#include "cqbm/oracle.hpp"
#include "support.hpp"

using namespace cqbm;

TEST(NoiseKernel, FrozenValues) {
    // M = 1, gamma = 0.01, k_B T = 3.9, cutoff 50; reference from 30-digit quadrature.
    const NoiseKernel k(1.0, 0.01, 3.9, 50.0);
    EXPECT_NEAR(k(0.0), 8.2762974105436380519, 1e-11);
    EXPECT_NEAR(k(0.37), -0.25138932091219531371, 1e-11);
    EXPECT_NEAR(k(2.5), -0.077634819390916245972, 1e-11);
    const NoiseKernel cold(1.0, 0.01, 0.0, 50.0);
    EXPECT_NEAR(cold(0.37), -0.29744729114162930317, 1e-11);
}

TEST(NoiseKernel, AgreesWithOracleKernel) {
    const NoiseKernel k(5.0, 0.01, 11.7, 50.0);
    for (double s : {0.0, 0.01, 0.5, 3.3, 17.0, 29.0})
        EXPECT_NEAR(k(s), oracle::noise_kernel(5.0, 0.01, 11.7, 50.0, s), 1e-10 * std::max(1.0, std::abs(k(0.0))));
}

TEST(NoiseKernel, SpectralWeightLimits) {
    const NoiseKernel k(2.0, 0.01, 3.0, 50.0);
    EXPECT_NEAR(k.spectral_weight(1e-10), 2.0 * 2.0 * 0.01 / M_PI * 6.0, 1e-12);
    EXPECT_NEAR(k.spectral_weight(1.0), 2.0 * 2.0 * 0.01 / M_PI / std::tanh(1.0 / 6.0), 1e-14);
}

TEST(NoiseKernel, TableMatchesDirectEvaluation) {
    const auto c = test::internal("fig3");
    const auto k = noise_kernel(c, 1, 3.0);
    ASSERT_FALSE(k.table().empty());
    EXPECT_LE(k.table_step(), M_PI / (8.0 * 50.0) + 1e-15);
    for (std::size_t i = 0; i < k.table().size(); i += 37)
        EXPECT_NEAR(k.table()[i], k(i * k.table_step()), 1e-12);
}

TEST(Influence, QuadraticFormIsSymmetricPositive) {
    const auto c = test::internal("fig4");
    const auto m = solve_determinant(c);
    const std::array<NoiseKernel, 2> ks{make_noise_kernel(c, 0), make_noise_kernel(c, 1)};
    for (double t : {1.0, 8.0, 22.0}) {
        const auto g = influence_form(c, m, particular_solution(c, m, t), ks, t);
        EXPECT_LE((g.quadratic - g.quadratic.transpose()).cwiseAbs().maxCoeff(), 1e-15);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(g.quadratic);
        EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12 * es.eigenvalues().maxCoeff());
        EXPECT_NEAR(g.E(1), 2.0 * g.quadratic(2, 3), 0.0);
        EXPECT_NEAR(g.B(1), 2.0 * g.quadratic(1, 3), 0.0);
    }
}

TEST(Influence, BruteForceAtShortTime) {
    const auto c = test::internal("fig3");
    const auto m = solve_determinant(c);
    const double t = 1.5;
    const std::array<NoiseKernel, 2> ks{make_noise_kernel(c, 0), make_noise_kernel(c, 1)};
    const auto g = influence_form(c, m, particular_solution(c, m, t), ks, t);
    Eigen::Matrix4d brute = Eigen::Matrix4d::Zero();
    for (int bath = 0; bath < 2; ++bath) {
        std::vector<std::function<double(double)>> paths;
        for (int j = 0; j < 4; ++j) {
            Endpoints e;
            (j < 2 ? e.final[j] : e.initial[j - 2]) = 1.0;
            const auto p = homogeneous_path(m, Sector::antidamped, e, t);
            paths.push_back([p, bath](double x) { return p.value(x)[bath]; });
        }
        const auto& o = c.osc[bath];
        const double T = c.bath[bath].thermal_energy, nu = c.bath[bath].cutoff;
        brute += oracle::brute_quadratic_form(
            paths, [&](double s) { return oracle::noise_kernel(o.mass, o.gamma, T, nu, s); }, t, 128);
    }
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
            EXPECT_LE(std::abs(g.quadratic(j, k) - brute(j, k)), 1e-7 * std::abs(brute(j, k)) + 1e-12) << j << k;
}

TEST(Influence, ForceTermsAreDiagnosticOnly) {
    const auto c = test::internal("fig3");
    const auto m = solve_determinant(c);
    const std::array<NoiseKernel, 2> ks{make_noise_kernel(c, 0), make_noise_kernel(c, 1)};
    const double t = 12.0;
    const auto p = particular_solution(c, m, t);
    const auto plain = influence_form(c, m, p, ks, t);
    const auto full = influence_form(c, m, p, ks, t, {.force_terms = true});
    EXPECT_FALSE(plain.has_force_terms);
    EXPECT_TRUE(full.has_force_terms);
    EXPECT_LE((plain.quadratic - full.quadratic).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_GT(full.constant, 0.0);
}
