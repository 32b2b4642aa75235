#pragma once

#include <limits>

namespace minres {

// A point of a curve eta(q) near the diagonal, stored by its offsets so that
// eta - q and eta' - 1 keep full relative precision when both are small.
struct ArcState {
    double q;
    double gap;     // eta - q
    double dslope;  // eta' - 1

    [[nodiscard]] double eta() const { return q + gap; }
    [[nodiscard]] double slope() const { return 1.0 + dslope; }
};

[[nodiscard]] inline ArcState arc_state(double q, double eta, double etap) { return {q, eta - q, etap - 1.0}; }

// Point of a convex curve with its second derivative.
struct CurvePoint {
    double q;
    double gap;
    double dslope;
    double curvature;

    [[nodiscard]] double value() const { return q + gap; }
    [[nodiscard]] double slope() const { return 1.0 + dslope; }
    [[nodiscard]] ArcState state() const { return {q, gap, dslope}; }
};

// g(q, eta, eta'; alpha) = 2 R eta'^2 / D^2 + (eta - q eta') / (eta D R),
// R = sqrt(eta^2 - q^2), D = eta^2 + alpha. alpha = 1 gives the unscaled integrand f.
[[nodiscard]] double lagrangian(const ArcState& s, double alpha);

// Value at eta = q, eta' = 1 with eta'' = curvature > 0; both terms have removable
// singularities there and the limit is sqrt(curvature / q) / (q^2 + alpha).
[[nodiscard]] double lagrangian_endpoint_limit(double q, double curvature, double alpha);

struct LagrangianPartials {
    double value;
    double d_v;      // g_eta
    double d_vp;     // g_eta'
    double d_p_vp;   // g_{q eta'}
    double d_v_vp;   // g_{eta eta'}
    double d_vp_vp;  // g_{eta' eta'}

    // g_eta - g_{q eta'} - eta' g_{eta eta'}
    [[nodiscard]] double euler_lagrange_numerator(double slope) const { return d_v - d_p_vp - slope * d_v_vp; }
};

[[nodiscard]] LagrangianPartials lagrangian_partials(const ArcState& s, double alpha);

// Scaled integrand with plain arguments; DomainError unless eta > q >= 0.
[[nodiscard]] double scaled_lagrangian(double q, double eta, double etap, double alpha);

struct LagrangianPoint {
    double p;
    double v;
    double vp;
    // v'' at a diagonal point v = p (needed only there); NaN when not supplied
    double endpoint_curvature = std::numeric_limits<double>::quiet_NaN();
};

// f(p, v, v'); at v = p it returns the removable-singularity limit when v' = 1 and the
// curvature is supplied, and throws DomainError otherwise.
[[nodiscard]] double f_eval(const LagrangianPoint& pt);

enum class Partial { v, vp, p_vp, v_vp, vp_vp };

[[nodiscard]] double pmp_derivatives(const LagrangianPoint& pt, Partial which);

}  // namespace minres
