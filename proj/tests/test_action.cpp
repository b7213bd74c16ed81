#include <gtest/gtest.h>

#include <random>

#include "cqbm/action.hpp"
#include "cqbm/force_moments.hpp"
#include "support.hpp"

using namespace cqbm;

namespace {

struct Setup {
    InternalConfig cfg;
    NormalModes modes;
};

Setup fig3() {
    Setup s{test::internal("fig3"), {}};
    s.modes = solve_determinant(s.cfg);
    return s;
}

}  // namespace

TEST(Action, PolarizationMatchesClosedFormForceTerms) {
    const auto s = fig3();
    for (double t : {2.0, 6.5, 11.0, 18.0, 27.5}) {
        const auto p = particular_solution(s.cfg, s.modes, t);
        const double S0 = classical_action(s.cfg, s.modes, p, {}, t);
        std::array<double, 4> lin{};
        for (int j = 0; j < 4; ++j) {
            EndpointVector e;
            e.xi[j] = 1.0;
            lin[j] = classical_action(s.cfg, s.modes, p, e, t) - S0;
        }
        const auto fm = force_moments(s.modes, s.cfg.force[0], s.cfg.force[1], t);
        const double scale = std::max({std::abs(fm.lambda1), std::abs(fm.lambda2), std::abs(fm.phi[0]), std::abs(fm.phi[1])});
        EXPECT_LE(std::abs(lin[2] - fm.lambda1) / scale, 1e-8) << t;
        EXPECT_LE(std::abs(lin[3] - fm.lambda2) / scale, 1e-8) << t;
        EXPECT_LE(std::abs(lin[0] - fm.phi[0]) / scale, 1e-8) << t;
        EXPECT_LE(std::abs(lin[1] - fm.phi[1]) / scale, 1e-8) << t;
    }
}

TEST(Action, FormReproducesDirectAction) {
    const auto s = fig3();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (double t : {4.0, 15.0}) {
        const auto p = particular_solution(s.cfg, s.modes, t);
        const auto form = classical_action_form(s.cfg, s.modes, p, t);
        for (int trial = 0; trial < 5; ++trial) {
            EndpointVector e;
            for (int j = 0; j < 4; ++j) {
                e.X[j] = u(rng);
                e.xi[j] = u(rng);
            }
            const double direct = classical_action(s.cfg, s.modes, p, e, t);
            EXPECT_LE(test::rel_diff(form.evaluate(e), direct, 1.0), 1e-10);
        }
    }
}

TEST(Action, BoundaryFormAgreesWithQuadratureAwayFromCaustics) {
    const auto s = fig3();
    for (double t : {2.0, 9.0, 21.0}) {
        const auto p = particular_solution(s.cfg, s.modes, t);
        const auto form = classical_action_form(s.cfg, s.modes, p, t, {.verify_refinement = true});
        EXPECT_LE(form.quadrature_deviation, 1e-10) << t;
        EXPECT_GE(form.refinement_change, 0.0);
        EXPECT_LE(form.refinement_change, 1e-10) << t;
        EXPECT_LE(form.linear_X.cwiseAbs().maxCoeff(), 1e-12 * form.linear_xi.cwiseAbs().maxCoeff() + 1e-15);
    }
}

TEST(Action, ForcesOnlyChangeLinearAndConstantTerms) {
    const auto s = fig3();
    const auto free = test::without_forces(s.cfg);
    const double t = 14.0;
    const auto a = classical_action_form(s.cfg, s.modes, particular_solution(s.cfg, s.modes, t), t);
    const auto b = classical_action_form(free, s.modes, particular_solution(free, s.modes, t), t);
    EXPECT_LE((a.bilinear - b.bilinear).cwiseAbs().maxCoeff(), 1e-13 * a.bilinear.cwiseAbs().maxCoeff());
    EXPECT_EQ(b.linear_xi.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(b.constant, 0.0);
    EXPECT_GT(a.linear_xi.cwiseAbs().maxCoeff(), 1e-3);
}

TEST(Action, LagrangianTerms) {
    const auto c = test::internal("fig3");
    PathSample p{{1.0, 0.0}, {0.0, 0.0}, {0.0, 1.0}, {0.0, 0.0}};
    // Only the coupling term survives: lambda / 2 X1 xi2.
    EXPECT_NEAR(lagrangian_value(c, p, {0.0, 0.0}), 0.5 * c.coupling, 1e-15);
    PathSample q{{0.0, 0.0}, {2.0, 0.0}, {1.0, 0.0}, {3.0, 0.0}};
    EXPECT_NEAR(lagrangian_value(c, q, {0.5, 0.0}), 0.5 * 2.0 * 3.0 - c.osc[0].gamma * 2.0 + 0.5, 1e-15);
}

TEST(Action, LabeledSlots) {
    const auto s = fig3();
    const auto p = particular_solution(s.cfg, s.modes, 5.0);
    const auto slots = labeled_slots(classical_action_form(s.cfg, s.modes, p, 5.0));
    ASSERT_EQ(slots.size(), 25u);
    EXPECT_EQ(slots[0].slot, "X_f1*xi_f1");
    EXPECT_EQ(slots[0].alias, "D1+Pi1");
    EXPECT_EQ(slots[22].alias, "Lambda1");
    EXPECT_EQ(slots.back().slot, "constant");
}
