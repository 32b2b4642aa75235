#pragma once

#include <functional>

#include "minres/extremal.hpp"
#include "minres/lagrangian.hpp"

namespace minres {

// int_0^rho g(q, eta, eta') dq + int_rho^1 g(q, nu, nu') dq; the unscaled J is alpha times this.
[[nodiscard]] double J_scaled(const ScaledProfile& profile);

// int_0^p0 f(p, v, v') dp on the unscaled curve.
[[nodiscard]] double J_unscaled(const ExtremalSolution& sol);

using CurveFn = std::function<CurvePoint(double)>;

// int_a^b g dp along an arbitrary curve (alpha = 1 gives f).
[[nodiscard]] double f_integral(const CurveFn& curve, double a, double b, double alpha = 1.0);

// Integral of 1/(1+v^2) [ (v - p v')/(v sqrt(v^2-p^2)) + d/dp( v' sqrt(v^2-p^2)/v ) ] over [a, b],
// with the exact differential expanded through v''.
[[nodiscard]] double gamma_integral(const CurveFn& curve, double a, double b);

// 1/(1+v^2) * v' sqrt(v^2-p^2)/v; f_integral = gamma_integral - [this]_a^b.
[[nodiscard]] double gamma_boundary(const CurvePoint& pt);

// J through the gamma form: the integral over (0, p0) plus the corner contribution at p = 0+.
[[nodiscard]] double gamma_form_J(const ExtremalSolution& sol);

using HeightFn = std::function<double(double, double)>;

struct ResistanceOptions {
    int n = 800;
    double h = 1e-5;
    bool richardson = true;
    bool half_disk = true;  // integrate x2 >= 0 and double
};

// int over the unit disk of 1/(1 + |grad u|^2), polar midpoint rule, gradient by central differences.
[[nodiscard]] double resistance_direct(const HeightFn& u, const ResistanceOptions& opt = {});
[[nodiscard]] double resistance_direct(const HeightFn& u, int n);

}  // namespace minres
