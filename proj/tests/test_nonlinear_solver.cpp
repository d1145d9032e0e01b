#include "lwbvp/errors.hpp"
#include "lwbvp/lw_constants.hpp"
#include "lwbvp/nonlinear_solver.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>

using namespace lwbvp;
using namespace lwbvp::testing;

namespace {

ThresholdTriple example1_triple() {
    return {Number(Rational(1, 120)), Number(Rational(2)), Number(Rational(124))};
}

double max_entry_gap(const Jacobian2& a, const Jacobian2& b) {
    double g = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) g = std::max(g, std::abs(a[i][j] - b[i][j]));
    return g;
}

}  // namespace

TEST(Cone, MembershipDetectsNegativityAndConvexity) {
    const auto concave = SolutionCurve::sample(1.0, 65, [](double t) { return t * (1.0 - t); });
    EXPECT_TRUE(cone_membership(concave).ok);
    const auto convex = SolutionCurve::sample(1.0, 65, [](double t) { return t * t; });
    EXPECT_GT(cone_membership(convex).convex_nodes, 0u);
    const auto negative = SolutionCurve::sample(1.0, 65, [](double t) { return -0.1 * t * (1.0 - t); });
    EXPECT_GT(cone_membership(negative).negative_nodes, 0u);
}

TEST(OperatorA, MapsTheConeIntoItself) {
    Random rng(59);
    struct Case { Problem p; double scale; };
    for (const Case& c : {Case{example1(), 20.0}, Case{example2(), 600.0}}) {
        const double gm = gamma(c.p.params());
        for (int k = 0; k < 100; ++k) {
            const SolutionCurve u = rng.cone_element(1.0, 1025, c.scale);
            ASSERT_TRUE(cone_membership(u).ok);
            const SolutionCurve v = apply_operator_A(c.p, u);
            const ConeReport r = cone_membership(v);
            EXPECT_TRUE(r.ok) << "case " << k << " min " << r.min_value << " d2 " << r.max_second_difference;
            EXPECT_GE(tail_min(v, c.p.eta.value()), gm * v.sup_norm() - 1e-10);
        }
    }
}

TEST(OperatorA, RejectsNegativeInput) {
    const auto u = SolutionCurve::constant(1.0, 65, -1e-3);
    EXPECT_THROW(apply_operator_A(example1(), u), DomainError);
    EXPECT_THROW(picard_iterate(example1(), u, 1e-10, 10), DomainError);
}

TEST(ComposeF, ClampsAndCounts) {
    const auto u = SolutionCurve::sample(1.0, 5, [](double t) { return t - 0.5; });
    std::size_t clamps = 0;
    const auto y = compose_f(example1(), u, &clamps);
    EXPECT_EQ(clamps, 2u);
    EXPECT_DOUBLE_EQ(y[0], 0.0);
    EXPECT_DOUBLE_EQ(y[4], 40.0 * 0.25 / 1.25);
}

TEST(Picard, SmallStartOnExampleOneIsResidualChecked) {
    const Problem p = example1();
    const auto r = picard_iterate(p, SolutionCurve::constant(1.0, kDefaultGridSize, 1e-3), 1e-10, 500);
    if (r.converged) {
        EXPECT_TRUE(residuals_pass(r.residuals, r.curve.spacing()));
        EXPECT_LT(r.curve.sup_norm(), 1.0 / 120.0);
    } else {
        EXPECT_FALSE(r.diagnostic.empty());
    }
    std::printf("Picard from 1e-3: converged=%d iterations=%zu norm=%.3g\n", r.converged, r.iterations,
                r.curve.sup_norm());
}

TEST(Picard, LinearProblemConvergesInOneStep) {
    Problem p = example2();
    p.f = FunctionSpec::constant(Number(Rational(1)));
    const auto r = picard_iterate(p, SolutionCurve::constant(1.0, 513, 0.0), 1e-12, 10);
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.iterations, 2u);
}

TEST(Picard, ReportsDivergence) {
    // f = u^2 grows without bound from a large start
    Problem p = example2();
    p.f = FunctionSpec::polynomial({Number(Rational(0)), Number(Rational(0)), Number(Rational(1))});
    SolverConfig cfg;
    const auto r = picard_iterate(p, SolutionCurve::constant(1.0, 257, 50.0), 1e-10, 100, cfg);
    EXPECT_FALSE(r.converged);
    EXPECT_TRUE(r.diverged);
    EXPECT_FALSE(r.diagnostic.empty());
}

TEST(Shooting, ResidualsVanishOnTheLinearSolution) {
    Problem p = example2();
    p.f = FunctionSpec::constant(Number(Rational(1)));
    const auto q = unit_load_solution(1.0, 0.5, 1.0, 1.0);
    const auto s = shooting_residual(p, q.B, q.A, 1025);
    EXPECT_NEAR(s.r1, 0.0, 1e-12);
    EXPECT_NEAR(s.r2, 0.0, 1e-12);
    EXPECT_FALSE(s.blew_up);
}

TEST(Shooting, BlowUpIsFlagged) {
    // a huge initial slope carries |u| past the blow-up bound
    const auto s = shooting_residual(example1(), 1.0, -1e12, 257, 1e9);
    EXPECT_TRUE(s.blew_up);
}

TEST(Newton, JacobianForwardDifferenceIsFirstOrder) {
    const Problem p = example1();
    const double u0 = 1.0, s0 = 5.0;
    const std::size_t n = 1025;
    double prev_gap = 0.0;
    for (double step : {4e-2, 2e-2, 1e-2}) {
        const double gap =
            max_entry_gap(shooting_jacobian(p, u0, s0, n, step), shooting_jacobian(p, u0, s0, n, step / 2.0, true));
        if (prev_gap > 0.0) {
            const double ratio = prev_gap / gap;
            EXPECT_GT(ratio, 1.6);
            EXPECT_LT(ratio, 2.4);
        }
        prev_gap = gap;
    }
}

TEST(Newton, ConvergesOnTheLinearProblemFromFarAway) {
    Problem p = example2();
    p.f = FunctionSpec::constant(Number(Rational(1)));
    const auto q = unit_load_solution(1.0, 0.5, 1.0, 1.0);
    const auto r = newton_shoot(p, 10.0, -7.0);
    ASSERT_TRUE(r.converged);
    EXPECT_NEAR(r.u0, q.B, 1e-8);
    EXPECT_NEAR(r.s0, q.A, 1e-8);
}

TEST(Classify, Labels) {
    const auto tt = example1_triple();
    EXPECT_EQ(classify_solution(SolutionCurve::constant(1.0, 65, 1e-3), tt, 1.0 / 3.0).label, SolutionLabel::small);
    EXPECT_EQ(classify_solution(SolutionCurve::constant(1.0, 65, 3.0), tt, 1.0 / 3.0).label, SolutionLabel::large_min);
    EXPECT_EQ(classify_solution(SolutionCurve::constant(1.0, 65, 1.0), tt, 1.0 / 3.0).label, SolutionLabel::middle);
    EXPECT_EQ(classify_solution(SolutionCurve::constant(1.0, 65, 2.0), tt, 1.0 / 3.0).label,
              SolutionLabel::unclassified);
    const auto c = classify_solution(SolutionCurve::sample(1.0, 7, [](double t) { return 1.0 + t; }), tt, 0.5);
    EXPECT_DOUBLE_EQ(c.norm, 2.0);
    EXPECT_DOUBLE_EQ(c.min_full, 1.0);
    EXPECT_DOUBLE_EQ(c.min_tail, 1.5);
}

TEST(FindSolutions, DuplicatesCollapseToOneSolution) {
    Problem p = example2();
    p.f = FunctionSpec::constant(Number(Rational(1)));
    SolverConfig cfg;
    cfg.grid_n = 513;
    cfg.shooting_starts = 6;
    const SolutionSet set = find_solutions(p, std::nullopt, cfg);
    ASSERT_EQ(set.solutions.size(), 1u);
    EXPECT_GT(set.candidates, 1u);
    const auto& s = set.solutions.front();
    EXPECT_TRUE(s.found_by_picard);
    EXPECT_TRUE(s.found_by_shooting);
    EXPECT_TRUE(s.cross_validated);
    const auto q = unit_load_solution(1.0, 0.5, 1.0, 1.0);
    EXPECT_NEAR(s.result.curve[0], q.B, 1e-9);
}

TEST(FindSolutions, ExampleOneHasThreeLabelledSolutions) {
    const SolutionSet set = find_solutions(example1(), example1_triple());
    ASSERT_GE(set.solutions.size(), 3u);
    bool small = false, large = false, middle = false;
    for (const auto& s : set.solutions) {
        small = small || s.cls.label == SolutionLabel::small;
        large = large || s.cls.label == SolutionLabel::large_min;
        middle = middle || s.cls.label == SolutionLabel::middle;
        EXPECT_TRUE(s.cone.ok);
        EXPECT_TRUE(residuals_pass(s.result.residuals, s.result.curve.spacing()));
    }
    EXPECT_TRUE(small && large && middle);
}

TEST(FindSolutions, ThreadCountDoesNotChangeTheResult) {
    SolverConfig one, many;
    one.grid_n = many.grid_n = 513;
    one.threads = 1;
    many.threads = 4;
    const SolutionSet a = find_solutions(example2(), std::nullopt, one);
    const SolutionSet b = find_solutions(example2(), std::nullopt, many);
    ASSERT_EQ(a.solutions.size(), b.solutions.size());
    EXPECT_EQ(a.candidates, b.candidates);
    for (std::size_t i = 0; i < a.solutions.size(); ++i) {
        const auto va = a.solutions[i].result.curve.values(), vb = b.solutions[i].result.curve.values();
        EXPECT_TRUE(std::equal(va.begin(), va.end(), vb.begin(), vb.end()));
    }
}

// ODE residuals of the verified example solutions, relative to h^2; the
// allowed constant in Tolerances leaves room above the largest of these.
TEST(FindSolutions, ResidualConstantOnBothExamples) {
    double worst = 0.0;
    for (const Problem& p : {example1(), example2()}) {
        for (const auto& s : find_solutions(p, std::nullopt).solutions) {
            const double h = s.result.curve.spacing();
            worst = std::max(worst, s.result.residuals.ode_residual_max / (h * h));
        }
    }
    std::printf("max ODE residual / h^2 over example solutions: %.3g\n", worst);
    EXPECT_LT(worst, kDefaultTolerances.ode_residual_constant);
}
