#include <cmath>

#include <gtest/gtest.h>

#include "minres/errors.hpp"
#include "minres/extremal.hpp"

using namespace minres;

namespace {

const ArcPtr& limit_arc() {
    static const ArcPtr nu = solve_nu(0.0);
    return nu;
}

const ScaledProfile& limit_profile() {
    static const ScaledProfile p = assemble_profile(0.0);
    return p;
}

}  // namespace

TEST(NuDerivatives, Examples) {
    std::vector<double> d0 = nu_derivatives_at_one(0.0);
    ASSERT_EQ(d0.size(), 4u);
    EXPECT_DOUBLE_EQ(d0[0], 1.0);
    EXPECT_DOUBLE_EQ(d0[1], 1.0);
    EXPECT_DOUBLE_EQ(d0[2], 1.0);
    EXPECT_DOUBLE_EQ(d0[3], 1.5);
    std::vector<double> d1 = nu_derivatives_at_one(1.0);
    EXPECT_DOUBLE_EQ(d1[2], 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(d1[3], 0.75);
    EXPECT_DOUBLE_EQ(nu_derivatives_at_one(3.0)[2], 0.0);
    EXPECT_EQ(nu_derivatives_at_one(0.2, 2).size(), 3u);
}

TEST(SolveNu, LimitArcValues) {
    const SingularArc& nu = *limit_arc();
    const CurvePoint z = nu.at(0.0);
    EXPECT_NEAR(z.value(), 0.3157595, 1e-6);
    EXPECT_NEAR(z.slope(), 0.5350553, 1e-6);
    EXPECT_NEAR(nu.curvature_at_one(), 1.0, 1e-10);
    const CurvePoint one = nu.at(1.0);
    EXPECT_DOUBLE_EQ(one.value(), 1.0);
    EXPECT_DOUBLE_EQ(one.slope(), 1.0);
}

TEST(SolveNu, TaylorAnchors) {
    for (double alpha : {0.0, 0.01, 0.1}) {
        ArcPtr nu = solve_nu(alpha);
        std::vector<double> d = nu_derivatives_at_one(alpha);
        EXPECT_NEAR(nu->curvature_at_one(), d[2], 1e-6);
        EXPECT_NEAR(nu->third_derivative_at_one(), d[3], 1e-6);
        // finite differences of the solved curvature near q = 1
        const double h = 1e-3;
        EXPECT_NEAR((nu->at(1.0).curvature - nu->at(1.0 - h).curvature) / h, d[3], 5e-3);
    }
}

TEST(SolveNu, ParameterContinuity) {
    // sup_q |nu''(q, a) - nu''(q, b)| <= C |a - b| on [0, 0.1]; C measured at 13.8 and frozen at 20
    constexpr double kC = 20.0;
    for (auto [a, b] : {std::pair{0.0, 0.01}, std::pair{0.03, 0.05}, std::pair{0.07, 0.1}}) {
        ArcPtr na = solve_nu(a), nb = solve_nu(b);
        double sup = 0.0;
        for (int i = 0; i <= 500; ++i) {
            const double q = i / 500.0;
            sup = std::max(sup, std::abs(na->at(q).curvature - nb->at(q).curvature));
        }
        EXPECT_LE(sup, kC * (b - a)) << a << " " << b;
    }
}

TEST(SwitchingCondition, SmallRhoBehaviour) {
    // I / rho^2 stays negative and settles as rho shrinks, wherever the arc reaches q = 0
    for (double alpha : {0.0, 0.1, 0.3, 0.5}) {
        ArcPtr nu = solve_nu(alpha);
        double prev_c = 0.0, prev_step = 0.0;
        for (double rho : {2e-3, 1e-3, 5e-4, 2.5e-4}) {
            const double c = I_of(rho, alpha, *nu) / (rho * rho);
            EXPECT_LT(c, 0.0) << alpha << " " << rho;
            if (prev_c != 0.0) {
                const double step = std::abs(c - prev_c);
                if (prev_step > 0.0) EXPECT_LT(step, 0.7 * prev_step) << alpha << " " << rho;
                prev_step = step;
            }
            prev_c = c;
        }
        EXPECT_LT(prev_step / std::abs(prev_c), 0.02) << alpha;
    }
    // for larger alpha the arc meets the diagonal before q = 0
    EXPECT_THROW((void)solve_nu(1.0), BlowUp);
}

TEST(SwitchingCondition, RootAndEndpointSign) {
    const SingularArc& nu = *limit_arc();
    EXPECT_NEAR(I_of(0.1089836, 0.0, nu), 0.0, 1e-7);
    EXPECT_GT(I_of(1.0 - 1e-2, 0.0, nu), 0.0);
    // I(1 - d, 0) d^2 -> -1 + 3 pi / 8
    const double d = 1e-3;
    EXPECT_NEAR(I_of(1.0 - d, 0.0, nu) * d * d, -1.0 + 3.0 * M_PI / 8.0, 2e-3);
}

TEST(SwitchingCondition, ClosedFormAtAlphaZero) {
    const SingularArc& nu = *limit_arc();
    for (double rho : {0.05, 0.1, 0.2, 0.5}) EXPECT_NEAR(I_closed_form_alpha0(rho, nu), I_of(rho, 0.0, nu), 1e-8) << rho;
    const double r = limit_profile().rho;
    EXPECT_NEAR(I_closed_form_alpha0(r, nu), 0.0, 1e-12);
    const double h = 1e-5;
    EXPECT_NEAR((I_closed_form_alpha0(r + h, nu) - I_closed_form_alpha0(r - h, nu)) / (2 * h), 0.220371, 1e-4);
}

TEST(SwitchingCondition, EndpointAsymptotics) {
    for (double alpha : {0.05, 0.1, 0.2}) {
        ArcPtr nu = solve_nu(alpha);
        double prev = 0.0;
        for (double d : {4e-3, 2e-3, 1e-3}) {
            const double c = I_of(1.0 - d, alpha, *nu) / std::sqrt(d);
            EXPECT_GT(c, 0.0);
            if (prev != 0.0) EXPECT_NEAR(c / prev, 1.0, 0.02) << alpha << " " << d;
            prev = c;
        }
    }
    ArcPtr beyond = solve_nu(0.34);
    EXPECT_LT(I_of(1.0 - 1e-3, 0.34, *beyond), 0.0);
}

TEST(SwitchingCondition, ClosedFormIntegral) {
    for (double alpha : {0.1, 0.2, 0.3})
        EXPECT_NEAR(endpoint_integral(alpha), endpoint_integral_closed_form(alpha), 1e-8) << alpha;
    EXPECT_NEAR(endpoint_integral_closed_form(1.0 / 3.0), 0.0, 1e-10);
    EXPECT_GT(endpoint_integral_closed_form(0.3), 0.0);
    EXPECT_LT(endpoint_integral_closed_form(0.4), 0.0);
}

TEST(FindSwitch, Examples) {
    EXPECT_NEAR(find_switch(0.0, *limit_arc()), 0.108984, 1e-6);
    const double a05 = 1.0 / (2.43337 * 2.43337);
    EXPECT_NEAR(find_switch(a05, *solve_nu(a05)), 1.33559 / 2.43337, 1e-4);
    const double a100 = 1.0 / (316.727 * 316.727);
    EXPECT_NEAR(find_switch(a100, *solve_nu(a100)), 34.5295 / 316.727, 1e-4);
    EXPECT_THROW((void)find_switch(0.4, *solve_nu(0.4)), ValidityError);
}

TEST(AssembleProfile, LimitValuesAndInvariants) {
    const ScaledProfile& p = limit_profile();
    EXPECT_NEAR(p.height0, 0.315736, 1e-5);
    EXPECT_NEAR(p.slope, 0.530068, 1e-5);
    for (double alpha : {0.0, 0.05, 0.2, 0.3}) {
        ScaledProfile prof = assemble_profile(alpha);
        EXPECT_GT(prof.slope, 0.0);
        EXPECT_LT(prof.slope, 1.0);
        EXPECT_LT(std::abs(I_of(prof.rho, alpha, *prof.nu)), 1e-10);
        double prev_slope = -1.0;
        for (int i = 0; i < 400; ++i) {
            const double q = i / 400.0;
            const CurvePoint c = prof.kappa(q);
            EXPECT_GT(c.gap, 0.0);
            EXPECT_GE(c.slope(), prev_slope - 1e-14);
            prev_slope = c.slope();
            if (q >= prof.rho) EXPECT_GT(c.curvature, 0.0);
        }
        EXPECT_NEAR(prof.kappa(0.0).value(), prof.height0, 1e-15);
    }
}

TEST(AssembleProfile, TableRowHeight) {
    const double p0 = 3.71647;
    EXPECT_NEAR(p0 * assemble_profile(1.0 / (p0 * p0)).height0, 1.0, 1e-4);
}

TEST(Adjoint, SignsAndEndpoints) {
    for (double alpha : {0.0, 0.01, 0.1}) {
        ScaledProfile prof = assemble_profile(alpha);
        AdjointProfile adj = adjoint_omega(prof);
        EXPECT_NEAR(adj.omega_rho, 0.0, 1e-15);
        EXPECT_NEAR(adj.domega_rho, 0.0, 1e-15);
        EXPECT_LT(std::abs(adj.omega0), 1e-8);
        EXPECT_LT(adj.domega0, 0.0);
        EXPECT_NEAR(adj.omega0, -4.0 * I_of(prof.rho, alpha, *prof.nu), 1e-11);
        for (auto [q, w] : adj.samples)
            if (q > 0.01 && q < prof.rho - 0.01) EXPECT_LT(w, 0.0) << alpha << " " << q;
    }
}

TEST(Adjoint, ShiftedUpperLimitBreaksTheCondition) {
    const ScaledProfile& p = limit_profile();
    EXPECT_GT(std::abs(adjoint_omega(p, 51, p.rho + 1e-2).omega0), 1e-4);
}

TEST(Jacobi, ScalingFieldAtAlphaZero) {
    // at alpha = 0 the equation is invariant under nu(q) -> nu(c q) / c, so q nu' - nu solves
    // the Jacobi equation with zeta(1) = 0, zeta'(1) = nu''(1) = 1
    const ScaledProfile& p = limit_profile();
    JacobiResult r = jacobi_check(p);
    for (int i = 0; i <= 20; ++i) {
        const double q = p.rho + (0.99 - p.rho) * i / 20.0;
        const CurvePoint c = p.nu->at(q);
        EXPECT_NEAR(r.at(q).x, q * c.slope() - c.value(), 1e-8) << q;
    }
    Sample one = r.at(1.0);
    EXPECT_NEAR(one.x, 0.0, 1e-15);
    EXPECT_NEAR(one.xdot, 1.0, 1e-15);
}

TEST(Jacobi, NoConjugatePoints) {
    for (double alpha : {0.0, 0.01, 0.1}) {
        JacobiResult r = jacobi_check(assemble_profile(alpha), 0.01);
        EXPECT_FALSE(r.sign_change);
        EXPECT_GT(r.min_abs_zeta, 0.0);
    }
}

TEST(FieldJacobian, ConstantNegativeSign) {
    FieldJacobian f = field_jacobian_check(0.01, 1e-3);
    EXPECT_EQ(f.sign, -1);
    ASSERT_FALSE(f.samples.empty());
    const ScaledProfile prof = assemble_profile(0.01);
    // at q = 0 the first two terms give -height0
    EXPECT_NEAR(f.samples.front().second, -prof.height0, 0.05);
    EXPECT_EQ(field_jacobian_check(0.0).sign, -1);
    EXPECT_EQ(field_jacobian_check(0.1).sign, -1);
}

TEST(FieldJacobian, VanishesLinearlyAtTheCorner) {
    FieldJacobian f = field_jacobian_check(0.01, 1e-3, 1e-2, 200);
    const auto [q, d] = f.samples.back();
    EXPECT_NEAR(d / (q - 1.0), 1.0, 0.05);
}

TEST(Abel, InvariantResidual) {
    const SingularArc& nu = *limit_arc();
    for (double q : {0.3, 0.5, 0.9}) EXPECT_LT(std::abs(abel_residual(nu, q)), 1e-6) << q;
    EXPECT_THROW((void)abel_residual(nu, 1.0), DomainError);
}

TEST(Unscale, TableRows) {
    ExtremalSolution s = solve_for_p0(3.71647);
    EXPECT_NEAR(s.M, 1.0, 1e-4);
    EXPECT_NEAR(s.r, 1.22077, 1e-4);
    EXPECT_NEAR(s.slope0, 0.632450, 1e-4);
    EXPECT_NEAR(solve_for_p0(15.9653).r, 1.96456, 1e-4);
    const ScaledProfile prof = assemble_profile(1.0 / (5.0 * 5.0));
    EXPECT_TRUE(unscale(prof, 5.0).profile == prof);
    EXPECT_THROW((void)unscale(prof, 5.01), InconsistentScale);
}

TEST(Unscale, CurveInvariants) {
    ExtremalSolution s = solve_for_height(2.0);
    const CurvePoint end = s.v(s.p0);
    EXPECT_NEAR(end.value(), s.p0, 1e-12);
    EXPECT_NEAR(end.slope(), 1.0, 1e-12);
    double prev = -1.0;
    for (int i = 0; i <= 200; ++i) {
        const double p = s.p0 * i / 200.0;
        const CurvePoint c = s.v(p);
        EXPECT_GE(c.value(), p);
        EXPECT_LE(c.value(), p + s.M + 1e-12);
        EXPECT_GE(c.slope(), prev - 1e-14);
        prev = c.slope();
        const CurvePoint k = s.profile.kappa(p / s.p0);
        EXPECT_NEAR(c.value(), s.p0 * k.value(), 1e-12 * s.p0);
    }
}

TEST(SolveForHeight, Examples) {
    EXPECT_NEAR(solve_for_height(0.5).p0, 2.43337, 1e-3);
    ExtremalSolution s = solve_for_height(2.5);
    EXPECT_NEAR(s.p0, 8.16986, 1e-3);
    EXPECT_NEAR(s.slope0, 0.553467, 1e-4);
    ExtremalSolution back = solve_for_height(solve_for_p0(7.0).M);
    EXPECT_NEAR(back.p0, 7.0, 1e-8);
    EXPECT_THROW((void)solve_for_height(-1.0), DomainError);
    EXPECT_THROW((void)solve_for_p0(1.5), ValidityError);
}

TEST(LimitConstants, Values) {
    LimitConstants c = limit_constants();
    EXPECT_NEAR(c.r_hat, 0.108984, 1e-5);
    EXPECT_NEAR(c.M_hat, 0.315736, 1e-5);
    EXPECT_NEAR(c.nu_hat0, 0.315759, 1e-5);
    EXPECT_NEAR(c.slope_hat, 0.530068, 1e-5);
    EXPECT_NEAR(c.nup_hat0, 0.535055, 1e-5);
    EXPECT_NEAR(c.J_hat, 10.7344, 1e-3);
}
