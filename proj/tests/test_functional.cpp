#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "minres/errors.hpp"
#include "minres/extremal.hpp"
#include "minres/functional.hpp"
#include "minres/geometry.hpp"

using namespace minres;

TEST(JScaled, LimitValue) { EXPECT_NEAR(J_scaled(assemble_profile(0.0)), 10.7344, 1e-3); }

TEST(JScaled, TableRows) {
    const double a1 = 1.0 / (3.71647 * 3.71647);
    EXPECT_NEAR(a1 * J_scaled(assemble_profile(a1)), 5.97791e-1, 5e-4);
    const double a50 = 1.0 / (158.373 * 158.373);
    EXPECT_NEAR(a50 * J_scaled(assemble_profile(a50)), 4.27905e-4, 5e-7);
}

TEST(JUnscaled, TableRowsAndScalingIdentity) {
    ExtremalSolution s15 = solve_for_height(1.5);
    EXPECT_NEAR(J_unscaled(s15), 3.50482e-1, 5e-4);
    ExtremalSolution s10 = solve_for_height(10.0);
    EXPECT_NEAR(J_unscaled(s10), 1.06143e-2, 1e-5);
    for (const ExtremalSolution* s : {&s15, &s10})
        EXPECT_NEAR(J_unscaled(*s), s->profile.alpha * J_scaled(s->profile), 1e-8);
}

TEST(GammaForm, AgreesWithDirectFunctional) {
    for (double M : {0.5, 1.0, 5.0}) {
        ExtremalSolution s = solve_for_height(M);
        EXPECT_NEAR(gamma_form_J(s), J_unscaled(s), 1e-7) << M;
    }
    EXPECT_NEAR(gamma_form_J(solve_for_height(0.5)), 1.06309, 1e-3);
}

TEST(GammaForm, IntegrationByPartsOnSyntheticCurves) {
    const double M = 0.7;
    CurveFn line = [M](double p) { return CurvePoint{p, M, 0.0, 0.0}; };
    EXPECT_NEAR(f_integral(line, 0.2, 2.0),
                gamma_integral(line, 0.2, 2.0) - (gamma_boundary(line(2.0)) - gamma_boundary(line(0.2))), 1e-10);
    // v = sqrt(p^2 + 1): strictly convex, away from the diagonal
    CurveFn hyp = [](double p) {
        const double v = std::sqrt(p * p + 1.0);
        return CurvePoint{p, v - p, p / v - 1.0, 1.0 / (v * v * v)};
    };
    EXPECT_NEAR(f_integral(hyp, 0.0, 3.0),
                gamma_integral(hyp, 0.0, 3.0) - (gamma_boundary(hyp(3.0)) - gamma_boundary(hyp(0.0))), 1e-10);
}

TEST(Integrand, BoundedUpToTheCorner) {
    ExtremalSolution s = solve_for_height(1.0);
    double prev = 0.0;
    for (int n : {100, 1000, 10000}) {
        double mx = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double p = s.p0 * i / n;
            const CurvePoint c = s.v(p);
            mx = std::max(mx, f_eval({p, c.value(), c.slope(), c.curvature}));
        }
        EXPECT_TRUE(std::isfinite(mx));
        if (prev > 0.0) EXPECT_NEAR(mx, prev, 1e-3 * prev);
        prev = mx;
    }
}

TEST(ResistanceDirect, Calibration) {
    EXPECT_NEAR(resistance_direct([](double, double) { return 0.0; }), std::numbers::pi, 1e-3);
    EXPECT_NEAR(resistance_direct([](double x1, double x2) { return -(1.0 - std::hypot(x1, x2)); }),
                std::numbers::pi / 2, 1e-3);
}

TEST(ResistanceDirect, HalfDiskMatchesFullDisk) {
    BodyEvaluator body(solve_for_height(1.0));
    HeightFn u = [&](double x1, double x2) { return body(x1, x2); };
    ResistanceOptions half, full;
    half.n = full.n = 120;
    full.half_disk = false;
    // the two grids place nodes differently, so they agree to discretisation error only
    EXPECT_NEAR(resistance_direct(u, half), resistance_direct(u, full), 1e-4);
}

TEST(ResistanceDirect, EqualsTwiceTheFunctional) {
    ExtremalSolution s = solve_for_height(1.5);
    BodyEvaluator body(s);
    const double R = resistance_direct([&](double x1, double x2) { return body(x1, x2); });
    EXPECT_NEAR(R, 7.00964e-1, 1e-2);
    EXPECT_NEAR(R / (2.0 * J_unscaled(s)), 1.0, 1e-2);
}
