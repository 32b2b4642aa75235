#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "minres/dense_solution.hpp"
#include "minres/lagrangian.hpp"
#include "minres/singular_ode.hpp"

namespace minres {

inline constexpr double kAlphaLimit = 1.0 / 3.0;

// Throws ValidityError unless 0 <= alpha < 1/3.
void check_alpha(double alpha);

// Singular-arc equation in shifted form: t = q - 1, x = nu - q, lambda = -1/4.
SingularIvp newton_ivp(double alpha);

// Right-hand side nu'' of the singular-arc equation and its partials in (nu, nu').
struct ArcAccel {
    double value;
    double d_nu;
    double d_nup;
};
[[nodiscard]] ArcAccel arc_accel(const ArcState& s, double alpha);

// [nu(1), nu'(1), nu''(1), nu'''(1)] truncated to order + 1 entries.
[[nodiscard]] std::vector<double> nu_derivatives_at_one(double alpha, int order = 3);

// Solution nu(q) of the singular-arc equation with nu(1) = nu'(1) = 1, on [q_min, 1].
class SingularArc {
public:
    SingularArc(double alpha, DenseSolution sol) : alpha_(alpha), sol_(std::move(sol)) {}

    [[nodiscard]] double alpha() const { return alpha_; }
    [[nodiscard]] double q_min() const { return 1.0 + sol_.t_lo(); }
    [[nodiscard]] CurvePoint at(double q) const;
    [[nodiscard]] double gap(double q) const { return sol_.value(q - 1.0); }
    [[nodiscard]] const DenseSolution& solution() const { return sol_; }
    // nu''(1) and nu'''(1) read off the seed polynomial
    [[nodiscard]] double curvature_at_one() const { return sol_.seed().accel()(0.0); }
    [[nodiscard]] double third_derivative_at_one() const { return sol_.seed().jerk(0.0); }

private:
    double alpha_;
    DenseSolution sol_;
};

using ArcPtr = std::shared_ptr<const SingularArc>;

ArcPtr solve_nu(double alpha, double tol = 1e-10, double q_min = 0.0);

// kappa: affine on [0, rho] with slope nu'(rho), equal to nu on [rho, 1].
struct ScaledProfile {
    double alpha = 0.0;
    double rho = 0.0;
    double slope = 0.0;
    double height0 = 0.0;
    ArcPtr nu;

    [[nodiscard]] CurvePoint kappa(double q) const;
    [[nodiscard]] double kappa_gap(double q) const;
    bool operator==(const ScaledProfile&) const = default;
};

// Switching-point condition, normalised as 1/4 int_0^rho q (g_eta - g_{q eta'} - eta' g_{eta eta'}) dq
// along the affine continuation of nu from rho.
[[nodiscard]] double I_of(double rho, double alpha, const SingularArc& nu);
[[nodiscard]] double I_closed_form_alpha0(double rho, const SingularArc& nu_hat);

// Continuation predictor for rho(alpha) on [0, 1/3).
[[nodiscard]] double switch_predictor(double alpha);

double find_switch(double alpha, const SingularArc& nu, std::optional<double> predictor = std::nullopt);

ScaledProfile assemble_profile(double alpha, double tol = 1e-10, std::optional<double> predictor = std::nullopt);

struct AdjointProfile {
    std::vector<std::pair<double, double>> samples;  // (q, omega)
    double omega0 = 0.0;
    double domega0 = 0.0;
    double omega_rho = 0.0;
    double domega_rho = 0.0;
};

// omega(s) = int_s^rho (s - q)(g_eta - g_{q eta'} - eta' g_{eta eta'}) dq on a uniform grid of [0, rho].
// rho_override evaluates the same integral with a different upper limit (fault injection).
AdjointProfile adjoint_omega(const ScaledProfile& profile, int n = 201,
                             std::optional<double> rho_override = std::nullopt);

struct JacobiResult {
    double min_abs_zeta;
    double argmin_q;
    bool sign_change;
    DenseSolution zeta;  // in t = q - 1

    [[nodiscard]] Sample at(double q) const { return zeta.eval(q - 1.0); }
};

// Jacobi field along kappa with zeta(1) = 0, zeta'(1) = 1, scanned on [0, 1 - eps_cp].
JacobiResult jacobi_check(const ScaledProfile& profile, double eps_cp = 1e-3, double tol = 1e-10);

struct FieldJacobian {
    int sign;
    std::vector<std::pair<double, double>> samples;  // (q, q kappa' - kappa + 2 alpha d kappa/d alpha)
};

// Sign of the field Jacobian on [0, 1 - dq]; throws SignChange if it is not constant.
FieldJacobian field_jacobian_check(double alpha, double delta_alpha = 0.0, double dq = 1e-2, int n = 1000);

// Euler-Lagrange residual g_eta - g_{q eta'} - eta' g_{eta eta'} - eta'' g_{eta' eta'} along nu,
// divided by the sum of the magnitudes of its four terms.
[[nodiscard]] double euler_lagrange_residual(const SingularArc& nu, double q);

// int_0^1 sqrt(q)(1 - 2q) / ((q^2 + alpha)^2 sqrt(1 - q)) dq, which fixes the sign of I(rho, alpha)
// as rho -> 1; evaluated by quadrature after q = sin^2(theta).
[[nodiscard]] double endpoint_integral(double alpha);
[[nodiscard]] double endpoint_integral_closed_form(double alpha);

// Residual of the Abel-type invariant equation satisfied by the alpha = 0 arc.
[[nodiscard]] double abel_residual(const SingularArc& nu_hat, double q);

struct ExtremalSolution {
    double p0 = 0.0;
    double M = 0.0;
    double r = 0.0;
    double slope0 = 0.0;
    double J = 0.0;
    ScaledProfile profile;

    // v(p) = p0 kappa(p / p0) on [0, p0], v(p) = p beyond; gap = v - p.
    [[nodiscard]] CurvePoint v(double p) const;
    [[nodiscard]] double v_gap(double p) const;
};

ExtremalSolution unscale(const ScaledProfile& profile, double p0);

// Profile for a prescribed height M, with J filled in.
ExtremalSolution solve_for_height(double M, double tol = 1e-10);
// Profile for a prescribed p0, with J filled in.
ExtremalSolution solve_for_p0(double p0, double tol = 1e-10);

struct LimitConstants {
    double r_hat;      // rho(0)
    double M_hat;      // kappa(0) at alpha = 0
    double nu_hat0;    // nu(0) at alpha = 0
    double slope_hat;  // nu'(rho(0))
    double nup_hat0;   // nu'(0) at alpha = 0
    double J_hat;      // scaled functional at alpha = 0
};

LimitConstants limit_constants(double tol = 1e-10);

}  // namespace minres
