#include "minres/functional.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "minres/errors.hpp"
#include "minres/numerics.hpp"

namespace minres {

namespace {

constexpr double kQuadTol = 1e-12;

double g_at(const CurvePoint& c, double alpha) {
    if (!(c.gap > 0.0)) return lagrangian_endpoint_limit(c.q, c.curvature, alpha);
    return lagrangian(c.state(), alpha);
}

}  // namespace

double J_scaled(const ScaledProfile& profile) {
    const double alpha = profile.alpha;
    const double curv1 = nu_derivatives_at_one(alpha, 2)[2];
    auto lin = [&](double q) { return lagrangian(profile.kappa(q).state(), alpha); };
    auto arc = [&](double q) {
        if (q >= 1.0) return lagrangian_endpoint_limit(1.0, curv1, alpha);
        return g_at(profile.nu->at(q), alpha);
    };
    return num::integrate(lin, 0.0, profile.rho, kQuadTol).value + num::integrate(arc, profile.rho, 1.0, kQuadTol).value;
}

double f_integral(const CurveFn& curve, double a, double b, double alpha) {
    return num::integrate([&](double p) { return g_at(curve(p), alpha); }, a, b, kQuadTol).value;
}

double J_unscaled(const ExtremalSolution& sol) {
    CurveFn v = [&sol](double p) { return sol.v(p); };
    return f_integral(v, 0.0, sol.r) + f_integral(v, sol.r, sol.p0);
}

double gamma_boundary(const CurvePoint& c) {
    const double v = c.value();
    const double R = std::sqrt(c.gap * (2.0 * c.q + c.gap));
    return c.slope() * R / (v * (1.0 + v * v));
}

double gamma_integral(const CurveFn& curve, double a, double b) {
    auto integrand = [&](double p) {
        CurvePoint c = curve(p);
        if (!(c.gap > 0.0)) throw DomainError("gamma form: curve touches the diagonal inside the interval");
        const double v = c.value();
        const double vp = c.slope();
        const double R = std::sqrt(c.gap * (2.0 * p + c.gap));
        const double lin = (c.gap - p * c.dslope) / (R * v);          // (v - p v') / (v R)
        const double vvp_p = c.gap + p * c.dslope + c.gap * c.dslope;  // v v' - p
        const double dphi = c.curvature * R / v + vp * vvp_p / (v * R) - vp * vp * R / (v * v);
        return (lin + dphi) / (1.0 + v * v);
    };
    return num::integrate(integrand, a, b, kQuadTol).value;
}

double gamma_form_J(const ExtremalSolution& sol) {
    CurveFn v = [&sol](double p) { return sol.v(p); };
    // v has a corner at p = 0 (even extension); the boundary term there is the planar facet.
    CurvePoint start = sol.v(0.0);
    return gamma_integral(v, 0.0, sol.r) + gamma_integral(v, sol.r, sol.p0) + gamma_boundary(start);
}

namespace {

double grid_integral(const HeightFn& u, int n, double h, bool half) {
    const double theta_span = half ? std::numbers::pi : 2.0 * std::numbers::pi;
    const double dr = 1.0 / n;
    const double dth = theta_span / n;
    std::vector<double> rows(static_cast<std::size_t>(n), 0.0);
    auto inside = [](double x1, double x2) { return x1 * x1 + x2 * x2 <= 1.0; };
    auto partial = [&](double x1, double x2, double u0, double e1, double e2) {
        const bool fwd = inside(x1 + e1, x2 + e2);
        const bool bwd = inside(x1 - e1, x2 - e2);
        if (fwd && bwd) return (u(x1 + e1, x2 + e2) - u(x1 - e1, x2 - e2)) / (2.0 * h);
        if (fwd) return (u(x1 + e1, x2 + e2) - u0) / h;
        return (u0 - u(x1 - e1, x2 - e2)) / h;
    };
    num::parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        const double r = (static_cast<double>(i) + 0.5) * dr;
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
            const double th = (j + 0.5) * dth;
            const double x1 = r * std::cos(th), x2 = r * std::sin(th);
            const double u0 = u(x1, x2);
            const double gx = partial(x1, x2, u0, h, 0.0);
            const double gy = partial(x1, x2, u0, 0.0, h);
            acc += 1.0 / (1.0 + gx * gx + gy * gy);
        }
        rows[i] = acc * r * dr * dth;
    });
    double total = 0.0;
    for (double v : rows) total += v;
    return half ? 2.0 * total : total;
}

}  // namespace

double resistance_direct(const HeightFn& u, const ResistanceOptions& opt) {
    if (opt.n < 2) throw DomainError("resistance_direct: resolution must be at least 2");
    const double fine = grid_integral(u, opt.n, opt.h, opt.half_disk);
    if (!opt.richardson) return fine;
    const double coarse = grid_integral(u, opt.n / 2, opt.h, opt.half_disk);
    return (4.0 * fine - coarse) / 3.0;
}

double resistance_direct(const HeightFn& u, int n) {
    ResistanceOptions opt;
    opt.n = n;
    return resistance_direct(u, opt);
}

}  // namespace minres
