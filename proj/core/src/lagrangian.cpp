#include "minres/lagrangian.hpp"

#include <cmath>
#include <string>

#include "minres/errors.hpp"

namespace minres {

namespace {

double radius(const ArcState& s) {
    if (!(s.gap > 0.0)) throw DomainError("lagrangian: need eta > q (gap = " + std::to_string(s.gap) + ")");
    return std::sqrt(s.gap * (2.0 * s.q + s.gap));
}

}  // namespace

double lagrangian(const ArcState& s, double alpha) {
    const double R = radius(s);
    const double eta = s.eta();
    const double D = eta * eta + alpha;
    const double vp = s.slope();
    // eta - q eta' = gap - q (eta' - 1)
    return 2.0 * R * vp * vp / (D * D) + (s.gap - s.q * s.dslope) / (eta * D * R);
}

double lagrangian_endpoint_limit(double q, double curvature, double alpha) {
    if (!(curvature > 0.0) || !(q > 0.0)) throw DomainError("endpoint limit needs q > 0 and positive curvature");
    return std::sqrt(curvature / q) / (q * q + alpha);
}

LagrangianPartials lagrangian_partials(const ArcState& s, double alpha) {
    const double R = radius(s);
    const double q = s.q;
    const double eta = s.eta();
    const double vp = s.slope();
    const double D = eta * eta + alpha;
    const double K = 1.0 / (eta * D * R);
    const double lin = s.gap - q * s.dslope;  // eta - q eta'
    const double dlogK = 1.0 / eta + 2.0 * eta / D + eta / (R * R);  // -d(log K)/d eta
    const double dR_term = eta / (R * D * D) - 4.0 * eta * R / (D * D * D);  // d(R/D^2)/d eta

    LagrangianPartials p{};
    p.value = 2.0 * R * vp * vp / (D * D) + lin * K;
    p.d_vp = 4.0 * R * vp / (D * D) - q * K;
    p.d_vp_vp = 4.0 * R / (D * D);
    p.d_p_vp = -4.0 * q * vp / (R * D * D) - K - q * q * K / (R * R);
    p.d_v_vp = 4.0 * vp * dR_term + q * K * dlogK;
    p.d_v = 2.0 * vp * vp * dR_term + K - lin * K * dlogK;
    return p;
}

double scaled_lagrangian(double q, double eta, double etap, double alpha) {
    if (!(eta > q) || q < 0.0 || !(eta > 0.0))
        throw DomainError("scaled_lagrangian: need eta > q >= 0");
    return lagrangian(arc_state(q, eta, etap), alpha);
}

double f_eval(const LagrangianPoint& pt) {
    if (pt.v < pt.p || !(pt.v > 0.0)) throw DomainError("f: need v >= p and v > 0");
    if (pt.v == pt.p) {
        if (pt.vp == 1.0 && std::isfinite(pt.endpoint_curvature))
            return lagrangian_endpoint_limit(pt.p, pt.endpoint_curvature, 1.0);
        throw DomainError("f: diverges at v = p unless v' = 1 with known curvature");
    }
    return lagrangian(arc_state(pt.p, pt.v, pt.vp), 1.0);
}

double pmp_derivatives(const LagrangianPoint& pt, Partial which) {
    if (!(pt.v > pt.p)) throw DomainError("f partials: need v > p");
    LagrangianPartials d = lagrangian_partials(arc_state(pt.p, pt.v, pt.vp), 1.0);
    switch (which) {
        case Partial::v: return d.d_v;
        case Partial::vp: return d.d_vp;
        case Partial::p_vp: return d.d_p_vp;
        case Partial::v_vp: return d.d_v_vp;
        case Partial::vp_vp: return d.d_vp_vp;
    }
    return 0.0;
}

}  // namespace minres
