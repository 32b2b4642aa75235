#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "minres/errors.hpp"
#include "minres/extremal.hpp"
#include "minres/lagrangian.hpp"

using namespace minres;

TEST(ScaledLagrangian, HandValues) {
    EXPECT_NEAR(scaled_lagrangian(0.0, 1.0, 0.0, 0.0), 1.0, 1e-15);
    EXPECT_NEAR(scaled_lagrangian(0.0, 1.0, 1.0, 0.0), 3.0, 1e-15);
    EXPECT_THROW((void)scaled_lagrangian(0.5, 0.5, 0.3, 0.0), DomainError);
    EXPECT_THROW((void)scaled_lagrangian(0.5, 0.4, 1.0, 0.0), DomainError);
}

TEST(FEval, HandValues) {
    EXPECT_NEAR(f_eval({0.0, 1.0, 0.0}), 0.5, 1e-15);
    EXPECT_NEAR(f_eval({0.0, 1.0, 1.0}), 1.0, 1e-15);
    EXPECT_THROW((void)f_eval({0.7, 0.7, 0.4}), DomainError);
    EXPECT_THROW((void)f_eval({0.7, 0.6, 1.0}), DomainError);
    EXPECT_THROW((void)f_eval({0.7, 0.7, 1.0}), DomainError);  // no curvature supplied
}

TEST(FEval, EndpointLimit) {
    // v = p + c/2 (p0 - p)^2 near p0
    const double p0 = 3.0, c = 0.3;
    const double limit = f_eval({p0, p0, 1.0, c});
    EXPECT_NEAR(limit, std::sqrt(c / p0) / (p0 * p0 + 1.0), 1e-15);
    for (double d : {1e-3, 1e-4, 1e-5}) {
        const double p = p0 - d;
        const double v = p + 0.5 * c * d * d, vp = 1.0 - c * d;
        EXPECT_NEAR(f_eval({p, v, vp}), limit, 10 * d * limit) << d;
    }
}

namespace {

constexpr double kStep = 1e-6;

double fd(const std::function<double(double)>& f, double x) { return (f(x + kStep) - f(x - kStep)) / (2 * kStep); }

void expect_close(double a, double b) { EXPECT_NEAR(a, b, 1e-5 * std::max(1.0, std::abs(b))); }

}  // namespace

TEST(PmpDerivatives, AgreeWithFiniteDifferences) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> up(0.1, 4.0), ugap(0.05, 2.0), uslope(0.2, 1.5);
    for (int k = 0; k < 50; ++k) {
        const double p = up(rng), v = p + ugap(rng), vp = uslope(rng);
        auto pd = [&](Partial w) { return pmp_derivatives({p, v, vp}, w); };
        expect_close(pd(Partial::v), fd([&](double x) { return f_eval({p, x, vp}); }, v));
        expect_close(pd(Partial::vp), fd([&](double x) { return f_eval({p, v, x}); }, vp));
        expect_close(pd(Partial::p_vp), fd([&](double x) { return pmp_derivatives({x, v, vp}, Partial::vp); }, p));
        expect_close(pd(Partial::v_vp), fd([&](double x) { return pmp_derivatives({p, x, vp}, Partial::vp); }, v));
        expect_close(pd(Partial::vp_vp), fd([&](double x) { return pmp_derivatives({p, v, x}, Partial::vp); }, vp));
        EXPECT_GT(pd(Partial::vp_vp), 0.0);
    }
    EXPECT_THROW((void)pmp_derivatives({1.0, 1.0, 1.0}, Partial::v), DomainError);
}

TEST(PmpDerivatives, SecondSlopeDerivativeHandValue) {
    for (double vp : {0.0, 0.5, 1.0}) EXPECT_NEAR(pmp_derivatives({0.0, 1.0, vp}, Partial::vp_vp), 1.0, 1e-14);
}

TEST(LagrangianPartials, EulerLagrangeNumeratorFactorsThroughArcAcceleration) {
    // g_eta - g_{q eta'} - eta' g_{eta eta'} = g_{eta' eta'} * nu''(q, eta, eta')
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> uq(0.0, 0.95), ugap(1e-3, 0.5), uds(-0.6, 0.0), ua(0.0, 0.3);
    for (int k = 0; k < 100; ++k) {
        const ArcState s{uq(rng), ugap(rng), uds(rng)};
        const double alpha = ua(rng);
        const LagrangianPartials d = lagrangian_partials(s, alpha);
        const double lhs = d.euler_lagrange_numerator(s.slope());
        const double rhs = d.d_vp_vp * arc_accel(s, alpha).value;
        EXPECT_NEAR(lhs, rhs, 1e-10 * (std::abs(lhs) + std::abs(d.d_v) + 1.0));
    }
}

TEST(ArcAccel, PartialsAgreeWithFiniteDifferences) {
    const double alpha = 0.07;
    for (ArcState s : {ArcState{0.2, 0.3, -0.4}, ArcState{0.8, 0.01, -0.05}, ArcState{0.0, 0.31, -0.47}}) {
        const ArcAccel a = arc_accel(s, alpha);
        expect_close(a.d_nu, fd([&](double g) { return arc_accel({s.q, g, s.dslope}, alpha).value; }, s.gap));
        expect_close(a.d_nup, fd([&](double ds) { return arc_accel({s.q, s.gap, ds}, alpha).value; }, s.dslope));
    }
}

TEST(PmpDerivatives, EulerLagrangeResidualOnSingularArc) {
    const ExtremalSolution sol = solve_for_height(1.0);
    for (int i = 0; i <= 40; ++i) {
        const double p = sol.r + (0.99 * sol.p0 - sol.r) * i / 40.0;
        const CurvePoint c = sol.v(p);
        const LagrangianPoint pt{p, c.value(), c.slope()};
        const double num = pmp_derivatives(pt, Partial::v) - pmp_derivatives(pt, Partial::p_vp) -
                           c.slope() * pmp_derivatives(pt, Partial::v_vp);
        const double vpp = num / pmp_derivatives(pt, Partial::vp_vp);
        EXPECT_NEAR(vpp, c.curvature, 1e-6) << "p " << p;
    }
}
