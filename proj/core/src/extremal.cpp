#include "minres/extremal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "minres/errors.hpp"
#include "minres/functional.hpp"
#include "minres/numerics.hpp"

namespace minres {

void check_alpha(double alpha) {
    if (!(alpha >= 0.0) || !(alpha < kAlphaLimit))
        throw ValidityError("alpha = " + std::to_string(alpha) +
                            " outside [0, 1/3) (p0 <= sqrt(3)): existence of the switching point is not established");
}

SingularIvp newton_ivp(double alpha) {
    auto g = [alpha](double t, double x, double xd) {
        const double s = x + t + 1.0;
        return -0.25 * (xd + 2.0) * (xd + 2.0) / (x + 2.0 * t + 2.0) + 2.0 * s * (xd + 1.0) * (xd + 1.0) / (s * s + alpha);
    };
    auto g_x = [alpha](double t, double x, double xd) {
        const double s = x + t + 1.0;
        const double den = x + 2.0 * t + 2.0;
        const double d = s * s + alpha;
        return 0.25 * (xd + 2.0) * (xd + 2.0) / (den * den) + 2.0 * (xd + 1.0) * (xd + 1.0) * (alpha - s * s) / (d * d);
    };
    auto g_xd = [alpha](double t, double x, double xd) {
        const double s = x + t + 1.0;
        return -0.5 * (xd + 2.0) / (x + 2.0 * t + 2.0) + 4.0 * s * (xd + 1.0) / (s * s + alpha);
    };
    return SingularIvp(-0.25, g, g_x, g_xd);
}

ArcAccel arc_accel(const ArcState& s, double alpha) {
    const double ds = s.dslope;
    const double k = s.eta();
    const double sum = k + s.q;
    const double d = k * k + alpha;
    ArcAccel a{};
    a.value = -0.25 * ds * ds / s.gap - 0.25 * (ds + 2.0) * (ds + 2.0) / sum + 2.0 * k * (1.0 + ds) * (1.0 + ds) / d;
    a.d_nu = 0.25 * ds * ds / (s.gap * s.gap) + 0.25 * (ds + 2.0) * (ds + 2.0) / (sum * sum) +
             2.0 * (1.0 + ds) * (1.0 + ds) * (alpha - k * k) / (d * d);
    a.d_nup = -0.5 * ds / s.gap - 0.5 * (ds + 2.0) / sum + 4.0 * k * (1.0 + ds) / d;
    return a;
}

std::vector<double> nu_derivatives_at_one(double alpha, int order) {
    if (alpha == -1.0) throw DomainError("nu_derivatives_at_one: alpha = -1");
    std::vector<double> d{1.0, 1.0, (3.0 - alpha) / (3.0 * (1.0 + alpha)),
                          (3.0 + 2.0 * alpha + alpha * alpha) / (2.0 * (1.0 + alpha) * (1.0 + alpha))};
    d.resize(static_cast<std::size_t>(std::clamp(order, 0, 3) + 1));
    return d;
}

CurvePoint SingularArc::at(double q) const {
    Sample s = sol_.eval(q - 1.0);
    return {q, s.x, s.xdot, s.xddot};
}

ArcPtr solve_nu(double alpha, double tol, double q_min) {
    if (!(alpha >= 0.0)) throw DomainError("solve_nu: alpha must be nonnegative");
    if (!(q_min >= 0.0 && q_min < 1.0)) throw DomainError("solve_nu: q_min must lie in [0, 1)");
    return std::make_shared<const SingularArc>(alpha, integrate(newton_ivp(alpha), q_min - 1.0, tol));
}

CurvePoint ScaledProfile::kappa(double q) const {
    if (q >= rho) return nu->at(q);
    const double g = kappa_gap(q);
    return {q, g, slope - 1.0, 0.0};
}

double ScaledProfile::kappa_gap(double q) const {
    if (q >= rho) return nu->gap(q);
    // eta(q) - q = height0 + (slope - 1) q
    return height0 + (slope - 1.0) * q;
}

namespace {

struct Affine {
    double rho, gap_rho, ds;
    [[nodiscard]] ArcState at(double q) const { return {q, gap_rho + ds * (q - rho), ds}; }
};

Affine affine_continuation(double rho, const SingularArc& nu) {
    CurvePoint p = nu.at(rho);
    Affine a{rho, p.gap, p.dslope};
    if (!(a.at(0.0).gap > 0.0) || !(a.gap_rho > 0.0))
        throw DomainError("affine continuation from rho = " + std::to_string(rho) + " meets the diagonal");
    return a;
}

double el_numerator(const ArcState& s, double alpha) {
    return lagrangian_partials(s, alpha).euler_lagrange_numerator(s.slope());
}

}  // namespace

double I_of(double rho, double alpha, const SingularArc& nu) {
    if (!(rho > 0.0 && rho < 1.0)) throw DomainError("I_of: rho must lie in (0, 1)");
    const Affine a = affine_continuation(rho, nu);
    auto f = [&](double q) { return q * el_numerator(a.at(q), alpha); };
    return 0.25 * num::integrate(f, 0.0, rho, 1e-13).value;
}

double I_closed_form_alpha0(double rho, const SingularArc& nu_hat) {
    if (!(rho > 0.0 && rho < 1.0)) throw DomainError("I_closed_form_alpha0: rho must lie in (0, 1)");
    CurvePoint p = nu_hat.at(rho);
    const double n = p.value();
    const double v = p.slope();
    const double h = n - rho * v;  // intercept of the tangent line
    if (h == 0.0) throw DomainError("I_closed_form_alpha0: rho nu' - nu vanishes");
    const double s = rho / n;
    const double c = std::sqrt(1.0 - s * s);
    const double bracket = 3.0 * v * std::asin(s) - 2.0 - 2.0 * v * v +
                           c / (n * n * n) * (h * h * h + h * rho * rho * v * v + n * n * n * (1.0 + 2.0 * v * v));
    return bracket / (4.0 * h * h);
}

double switch_predictor(double alpha) {
    static constexpr std::array<std::pair<double, double>, 8> table{{{0.0, 0.108984},
                                                                     {0.05, 0.265},
                                                                     {0.1, 0.395},
                                                                     {0.169, 0.545},
                                                                     {0.25, 0.715},
                                                                     {0.3, 0.815},
                                                                     {0.33, 0.905},
                                                                     {1.0 / 3.0, 0.915}}};
    alpha = std::clamp(alpha, 0.0, 1.0 / 3.0);
    for (std::size_t i = 1; i < table.size(); ++i) {
        if (alpha <= table[i].first) {
            const auto [a0, r0] = table[i - 1];
            const auto [a1, r1] = table[i];
            return r0 + (r1 - r0) * (alpha - a0) / (a1 - a0);
        }
    }
    return table.back().second;
}

double find_switch(double alpha, const SingularArc& nu, std::optional<double> predictor) {
    check_alpha(alpha);
    const double guess = predictor.value_or(switch_predictor(alpha));
    auto I = [&](double rho) { return I_of(rho, alpha, nu); };
    const double lo_limit = std::max(1e-4, nu.q_min() + 1e-9);
    auto br = num::bracket_near(I, guess, lo_limit, 1.0 - 1e-4, 0.01);
    if (!br) throw NoRoot("no sign change of I(rho, alpha) for alpha = " + std::to_string(alpha));
    if (br->lo == br->hi) return br->lo;
    return num::solve_bracketed(I, br->lo, br->hi, 1e-15, 1e-14);
}

ScaledProfile assemble_profile(double alpha, double tol, std::optional<double> predictor) {
    check_alpha(alpha);
    ArcPtr nu = solve_nu(alpha, tol, 0.0);
    const double rho = find_switch(alpha, *nu, predictor);
    CurvePoint p = nu->at(rho);
    ScaledProfile prof;
    prof.alpha = alpha;
    prof.rho = rho;
    prof.slope = p.slope();
    // kappa(0) = nu(rho) - rho nu'(rho) = gap - rho (nu' - 1)
    prof.height0 = p.gap - rho * p.dslope;
    prof.nu = std::move(nu);
    if (!(prof.slope > 0.0 && prof.slope < 1.0) || !(prof.height0 > 0.0))
        throw ValidityError("assembled profile is not convex-admissible at alpha = " + std::to_string(alpha));
    return prof;
}

AdjointProfile adjoint_omega(const ScaledProfile& profile, int n, std::optional<double> rho_override) {
    const double rho = rho_override.value_or(profile.rho);
    const Affine a = affine_continuation(rho, *profile.nu);
    const double alpha = profile.alpha;
    auto E = [&](double q) { return el_numerator(a.at(q), alpha); };
    auto omega = [&](double s) {
        return num::integrate([&](double q) { return (s - q) * E(q); }, s, rho, 1e-13).value;
    };
    AdjointProfile out;
    out.samples.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        double s = rho * k / (n - 1);
        out.samples.emplace_back(s, k == n - 1 ? 0.0 : omega(s));
    }
    out.omega0 = out.samples.front().second;
    out.domega0 = num::integrate(E, 0.0, rho, 1e-13).value;
    out.omega_rho = out.samples.back().second;
    out.domega_rho = 0.0;  // empty integration interval
    return out;
}

JacobiResult jacobi_check(const ScaledProfile& profile, double eps_cp, double tol) {
    const double alpha = profile.alpha;
    const auto d = nu_derivatives_at_one(alpha, 3);
    const double a = d[2], b = d[3];
    const double alpha0 = b / (3.0 * a);
    const double beta0 = -b / (6.0 * a) - 0.5 + 4.0 / (1.0 + alpha);
    constexpr double t_small = 1e-9;
    auto accel = [&profile, alpha](double t) { return arc_accel(profile.kappa(1.0 + t).state(), alpha); };
    auto af = [=](double t) { return std::abs(t) < t_small ? alpha0 : t * accel(t).d_nu - 1.0 / t; };
    auto bf = [=](double t) { return std::abs(t) < t_small ? beta0 : accel(t).d_nup + 1.0 / t; };
    VariationalCoeffs c(-0.25, af, bf, [](double) { return 0.0; });
    DenseSolution z = integrate_variational(c, 1.0, -1.0, tol, {profile.rho - 1.0});

    JacobiResult res{std::numeric_limits<double>::infinity(), 0.0, false, z};
    const int n = 4000;
    const double q_hi = 1.0 - eps_cp;
    double first_sign = 0.0;
    for (int k = 0; k <= n; ++k) {
        double q = q_hi * k / n;
        double v = z.value(q - 1.0);
        if (std::abs(v) < res.min_abs_zeta) {
            res.min_abs_zeta = std::abs(v);
            res.argmin_q = q;
        }
        double sg = v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0);
        if (first_sign == 0.0) first_sign = sg;
        if (sg != first_sign) res.sign_change = true;
    }
    if (res.sign_change) res.min_abs_zeta = 0.0;
    return res;
}

FieldJacobian field_jacobian_check(double alpha, double delta_alpha, double dq, int n) {
    check_alpha(alpha);
    if (delta_alpha <= 0.0) delta_alpha = std::max(1e-3 * alpha, 1e-5);
    const ScaledProfile mid = assemble_profile(alpha);
    const bool central = alpha - delta_alpha >= 0.0;
    const ScaledProfile up = assemble_profile(alpha + delta_alpha, 1e-10, mid.rho);
    const ScaledProfile down = central ? assemble_profile(alpha - delta_alpha, 1e-10, mid.rho) : mid;
    const double width = central ? 2.0 * delta_alpha : delta_alpha;

    FieldJacobian out{0, {}};
    for (int k = 0; k <= n; ++k) {
        double q = (1.0 - dq) * k / n;
        CurvePoint p = mid.kappa(q);
        double dk = (up.kappa_gap(q) - down.kappa_gap(q)) / width;
        // q kappa' - kappa = q (kappa' - 1) - (kappa - q)
        double B = q * p.dslope - p.gap + 2.0 * alpha * dk;
        out.samples.emplace_back(q, B);
        int sg = B > 0 ? 1 : (B < 0 ? -1 : 0);
        if (out.sign == 0) out.sign = sg;
        if (sg != out.sign)
            throw SignChange("field Jacobian changes sign near q = " + std::to_string(q) +
                             " at alpha = " + std::to_string(alpha), q);
    }
    return out;
}

double euler_lagrange_residual(const SingularArc& nu, double q) {
    const CurvePoint c = nu.at(q);
    if (!(c.gap > 0.0)) throw DomainError("euler_lagrange_residual: q is on the diagonal");
    const LagrangianPartials d = lagrangian_partials(c.state(), nu.alpha());
    const double t1 = d.d_v, t2 = d.d_p_vp, t3 = c.slope() * d.d_v_vp, t4 = c.curvature * d.d_vp_vp;
    return (t1 - t2 - t3 - t4) / (std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4));
}

double endpoint_integral(double alpha) {
    if (!(alpha > 0.0)) throw DomainError("endpoint_integral: alpha must be positive");
    auto f = [alpha](double th) {
        const double s = std::sin(th);
        const double s2 = s * s;
        const double d = s2 * s2 + alpha;
        return 2.0 * s2 * std::cos(2.0 * th) / (d * d);
    };
    return num::integrate(f, 0.0, std::numbers::pi / 2, 1e-14).value;
}

double endpoint_integral_closed_form(double alpha) {
    if (!(alpha > 0.0)) throw DomainError("endpoint_integral_closed_form: alpha must be positive");
    const double sa = std::sqrt(alpha), s1 = std::sqrt(1.0 + alpha);
    return std::numbers::pi * std::sqrt(2.0) / 8.0 * (1.0 - alpha - sa * s1) /
           (std::pow(alpha, 1.25) * std::pow(1.0 + alpha, 1.5) * std::sqrt(sa + s1));
}

double abel_residual(const SingularArc& nu_hat, double q) {
    if (!(q > 0.0 && q <= 1.0)) throw DomainError("abel_residual: q must lie in (0, 1)");
    CurvePoint p = nu_hat.at(q);
    const double t = p.value() / q;
    const double tm1 = p.gap / q;  // t - 1
    const double t2m1 = tm1 * (2.0 + tm1);
    const double x = (q * p.dslope - p.gap) / q;  // (q nu' - nu) / q
    if (x == 0.0 || std::abs(t2m1) < 1e-14) throw DomainError("abel_residual: singular point (x = 0 or t = 1)");
    const double dxdt = p.curvature * q / x - 1.0;
    return dxdt - (2.0 + 1.5 * (x / t + t / x) - x / (2.0 * t * t2m1));
}

CurvePoint ExtremalSolution::v(double p) const {
    if (p > p0) return {p, 0.0, 0.0, 0.0};
    CurvePoint k = profile.kappa(p / p0);
    return {p, p0 * k.gap, k.dslope, k.curvature / p0};
}

double ExtremalSolution::v_gap(double p) const {
    if (p >= p0) return 0.0;
    return p0 * profile.kappa_gap(p / p0);
}

ExtremalSolution unscale(const ScaledProfile& profile, double p0) {
    if (!(profile.alpha > 0.0) || !(p0 > 0.0) || std::abs(p0 - 1.0 / std::sqrt(profile.alpha)) > 1e-12 * p0)
        throw InconsistentScale("p0 = " + std::to_string(p0) + " does not match alpha = " + std::to_string(profile.alpha));
    ExtremalSolution s;
    s.p0 = p0;
    s.M = p0 * profile.height0;
    s.r = p0 * profile.rho;
    s.slope0 = profile.slope;
    s.J = std::numeric_limits<double>::quiet_NaN();
    s.profile = profile;
    return s;
}

ExtremalSolution solve_for_p0(double p0, double tol) {
    if (!(p0 > 0.0)) throw DomainError("p0 must be positive");
    const double alpha = 1.0 / (p0 * p0);
    check_alpha(alpha);
    ScaledProfile prof = assemble_profile(alpha, tol);
    ExtremalSolution s = unscale(prof, p0);
    s.J = alpha * J_scaled(prof);
    return s;
}

ExtremalSolution solve_for_height(double M, double tol) {
    if (!(M > 0.0) || !std::isfinite(M)) throw DomainError("height M must be positive");
    // M ~ M_hat p0 - c / p0 for large p0
    constexpr double m_hat = 0.315736, c = 0.65;
    const double guess = (M + std::sqrt(M * M + 4.0 * m_hat * c)) / (2.0 * m_hat);
    const double p_min = std::sqrt(3.0) * (1.0 + 1e-9);

    auto height = [&](double p0) { return p0 * assemble_profile(1.0 / (p0 * p0), tol).height0 - M; };
    double lo = std::max(p_min, 0.98 * guess), hi = std::max(lo * 1.0001, 1.02 * guess);
    double flo = height(lo), fhi = height(hi);
    for (int i = 0; i < 40 && flo > 0.0; ++i) {
        if (lo <= p_min) throw NoRoot("height M = " + std::to_string(M) + " needs p0 <= sqrt(3)");
        hi = lo;
        fhi = flo;
        lo = std::max(p_min, lo * 0.9);
        flo = height(lo);
    }
    for (int i = 0; i < 40 && fhi < 0.0; ++i) {
        lo = hi;
        flo = fhi;
        hi *= 1.1;
        fhi = height(hi);
    }
    if (flo > 0.0 || fhi < 0.0) throw NoRoot("could not bracket p0 for height M = " + std::to_string(M));
    const double p0 = num::solve_bracketed(height, lo, hi, 1e-13 * hi, 1e-13);
    return solve_for_p0(p0, tol);
}

LimitConstants limit_constants(double tol) {
    ScaledProfile prof = assemble_profile(0.0, tol);
    CurvePoint z = prof.nu->at(0.0);
    return {prof.rho, prof.height0, z.value(), prof.slope, z.slope(), J_scaled(prof)};
}

}  // namespace minres
