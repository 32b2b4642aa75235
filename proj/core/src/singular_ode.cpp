#include "minres/singular_ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "minres/errors.hpp"

namespace minres {

SingularIvp::SingularIvp(double lambda, Field3 g, Field3 g_x, Field3 g_xdot)
    : lambda_(lambda), g_(std::move(g)), g_x_(std::move(g_x)), g_xdot_(std::move(g_xdot)) {
    if (!(lambda != 0.0 && std::abs(lambda) < 3.0 / 8.0))
        throw DomainError("SingularIvp: need 0 < |lambda| < 3/8, got " + std::to_string(lambda));
    g_origin_ = g_(0.0, 0.0, 0.0);
    if (g_origin_ == 0.0 || !std::isfinite(g_origin_))
        throw DomainError("SingularIvp: g(0,0,0) must be finite and nonzero");
}

double accel_at_origin(const SingularIvp& ivp) { return ivp.g_origin() / (1.0 - 2.0 * ivp.lambda()); }

namespace {

struct Interval {
    double lo, hi;
};

Interval seed_interval(double tau, int side) {
    if (side > 0) return {0.0, tau};
    if (side < 0) return {-tau, 0.0};
    return {-tau, tau};
}

double lambda_term(double lambda, double eps) {
    double r = (1.0 + eps) / (1.0 - eps);
    return 8.0 / 3.0 * std::abs(lambda) * r * r;
}

struct Norms {
    double gx = 0.0, gxd = 0.0, gt = 0.0;
};

Norms sample_norms(const SingularIvp& ivp, Interval iv, double xmax, double vmax) {
    Norms n;
    constexpr int k = 9;
    const double dt = 1e-6;
    for (int i = 0; i < k; ++i) {
        double t = iv.lo + (iv.hi - iv.lo) * i / (k - 1);
        for (int j = 0; j < k; ++j) {
            double x = -xmax + 2.0 * xmax * j / (k - 1);
            for (int m = 0; m < k; ++m) {
                double v = -vmax + 2.0 * vmax * m / (k - 1);
                n.gx = std::max(n.gx, std::abs(ivp.g_x(t, x, v)));
                n.gxd = std::max(n.gxd, std::abs(ivp.g_xdot(t, x, v)));
                n.gt = std::max(n.gt, std::abs(ivp.g(t + dt, x, v) - ivp.g(t - dt, x, v)) / (2 * dt));
            }
        }
    }
    if (!std::isfinite(n.gx) || !std::isfinite(n.gxd) || !std::isfinite(n.gt))
        n.gx = n.gxd = n.gt = INFINITY;
    return n;
}

}  // namespace

PicardSeed picard_seed(const SingularIvp& ivp, double epsilon, const SeedOptions& opt) {
    const double lam = ivp.lambda();
    const double a0 = accel_at_origin(ivp);
    const double rho0 = std::max(0.9, 0.5 * (1.0 + 8.0 / 3.0 * std::abs(lam)));

    if (epsilon <= 0.0) {
        epsilon = 0.1;
        for (int i = 0; i < 30 && lambda_term(lam, epsilon) > 0.95 * rho0; ++i) epsilon *= 0.5;
    }
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ContractionFailure("epsilon must lie in (0, 1)");
    const double lt = lambda_term(lam, epsilon);
    if (lt >= rho0)
        throw ContractionFailure("contraction impossible: lambda term " + std::to_string(lt) +
                                 " exceeds target " + std::to_string(rho0));

    double tau = opt.tau_max;
    double contraction = 0.0;
    while (true) {
        if (tau < 1e-8) throw ContractionFailure("no admissible seed radius");
        Interval iv = seed_interval(tau, opt.side);
        Norms nm = sample_norms(ivp, iv, 0.5 * (1 + epsilon) * std::abs(a0) * tau * tau,
                                (1 + epsilon) * std::abs(a0) * tau);
        double rho = lt + 0.5 * nm.gx * tau * tau + nm.gxd * tau;
        double a = nm.gt + nm.gxd * std::abs(a0);
        double b = 0.5 * nm.gx * std::abs(a0);
        bool self_map = rho + tau * (a * tau + b) / (epsilon * std::abs(a0)) < 1.0;
        if (rho <= rho0 && self_map) {
            contraction = rho;
            break;
        }
        tau *= 0.5;
    }

    Interval iv = seed_interval(tau, opt.side);
    const auto nodes = ChebSeries::nodes(iv.lo, iv.hi, opt.nodes);
    std::vector<double> acc(nodes.size(), a0);
    std::vector<double> history;
    SeedSegment seg(ChebSeries::interpolate(iv.lo, iv.hi, acc), 0.0);
    for (int it = 0;; ++it) {
        if (it >= opt.max_iterations) throw ContractionFailure("Picard iteration did not converge");
        std::vector<double> next(nodes.size());
        double diff = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            double t = nodes[i], u, w;
            seg.moments(t, u, w);
            next[i] = lam * u * u / w + ivp.g(t, t * t * w, t * u);
            if (!std::isfinite(next[i])) throw ContractionFailure("Picard iterate left the domain of g");
            diff = std::max(diff, std::abs(next[i] - acc[i]));
        }
        history.push_back(diff);
        acc = std::move(next);
        seg = SeedSegment(ChebSeries::interpolate(iv.lo, iv.hi, acc), 0.0);
        if (diff < opt.tol / 10) break;
    }
    return {tau, epsilon, rho0, contraction, std::move(history), DenseSolution(seg, {}, iv.lo, iv.hi)};
}

namespace {

// xddot on stepper segments is the derivative of the dense velocity, one order less accurate
// than the state, so the steps run tighter than the requested residual level.
double stepper_tol(double tol) { return std::max(tol * 1e-3, 1e-14); }

}  // namespace

DenseSolution integrate(const SingularIvp& ivp, double t_end, double tol) {
    if (t_end == 0.0) throw DomainError("integrate: t_end must be nonzero");
    if (!(tol > 0.0)) throw DomainError("integrate: tol must be positive");
    const int side = t_end > 0 ? 1 : -1;
    SeedOptions so;
    so.tol = tol;
    so.side = side;
    so.tau_max = std::min(0.5, std::abs(t_end));
    PicardSeed ps = picard_seed(ivp, 0.0, so);
    const SeedSegment& seed = ps.seed.seed();
    const double lo = std::min(0.0, t_end), hi = std::max(0.0, t_end);
    const double t_start = side * ps.tau;
    if (std::abs(t_end) <= ps.tau) return DenseSolution(seed, {}, lo, hi);

    Sample s0 = seed.eval(t_start);
    const double sgn = accel_at_origin(ivp) > 0 ? 1.0 : -1.0;
    Rhs2 f = [&ivp](double t, const State2& y) { return State2{y[1], ivp.rhs(t, y[0], y[1])}; };
    auto valid = [sgn](double, const State2& y) { return y[0] * sgn > 0.0; };
    StepperOptions opt;
    opt.rtol = opt.atol = stepper_tol(tol);
    StepperResult r = dop853(f, t_start, {s0.x, s0.xdot}, t_end, opt, valid);
    if (!r.completed)
        throw BlowUp("integration stopped at t=" + std::to_string(r.t_reached) + ": " + r.failure, r.t_reached);
    return DenseSolution(seed, std::move(r.segments), lo, hi);
}

double ode_residual(const SingularIvp& ivp, const DenseSolution& sol, double t) {
    Sample s = sol.eval(t);
    return std::abs(s.xddot - ivp.rhs(t, s.x, s.xdot));
}

VariationalCoeffs::VariationalCoeffs(double lambda, Field1 alpha, Field1 beta, Field1 sigma)
    : lambda_(lambda), alpha_(std::move(alpha)), beta_(std::move(beta)), sigma_(std::move(sigma)) {
    if (!(lambda > -0.5 && lambda < 0.0))
        throw DomainError("VariationalCoeffs: need -1/2 < lambda < 0, got " + std::to_string(lambda));
}

double variational_accel_at_origin(const VariationalCoeffs& c, double ydot0) {
    return ((c.alpha(0.0) + c.beta(0.0)) * ydot0 + c.sigma(0.0)) / (1.0 - 2.0 * c.lambda());
}

DenseSolution integrate_variational(const VariationalCoeffs& c, double ydot0, double t_end, double tol,
                                    const std::vector<double>& breakpoints) {
    if (t_end == 0.0) throw DomainError("integrate_variational: t_end must be nonzero");
    const double dir = t_end > 0 ? 1.0 : -1.0;
    const double lam = c.lambda();
    const double a0 = variational_accel_at_origin(c, ydot0);

    // seed radius from the linear contraction condition 2|lambda| + (|alpha|/2 + |beta|) tau <= 0.9
    double tau = std::min(0.05, std::abs(t_end) / 8.0);
    for (double b : breakpoints)
        if (b * dir > 0) tau = std::min(tau, 0.5 * std::abs(b));
    while (true) {
        double na = 0.0, nb = 0.0;
        for (int i = 0; i <= 32; ++i) {
            double t = dir * tau * i / 32.0;
            na = std::max(na, std::abs(c.alpha(t)));
            nb = std::max(nb, std::abs(c.beta(t)));
        }
        if (2.0 * std::abs(lam) + (0.5 * na + nb) * tau <= 0.9) break;
        tau *= 0.5;
        if (tau < 1e-8) throw ContractionFailure("variational seed: no admissible radius");
    }

    const double lo = dir > 0 ? 0.0 : -tau, hi = dir > 0 ? tau : 0.0;
    const auto nodes = ChebSeries::nodes(lo, hi, 24);
    std::vector<double> acc(nodes.size(), a0);
    SeedSegment seg(ChebSeries::interpolate(lo, hi, acc), ydot0);
    for (int it = 0;; ++it) {
        if (it >= 400) throw ContractionFailure("variational Picard iteration did not converge");
        double diff = 0.0, scale = 1.0;
        std::vector<double> next(nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            double t = nodes[i], u, w;
            seg.moments(t, u, w);
            // (t yd - y)/t^2 = U - W,  y/t = ydot0 + t W
            next[i] = 4.0 * lam * (u - w) + c.alpha(t) * (ydot0 + t * w) + c.beta(t) * (ydot0 + t * u) + c.sigma(t);
            diff = std::max(diff, std::abs(next[i] - acc[i]));
            scale = std::max(scale, std::abs(next[i]));
        }
        acc = std::move(next);
        seg = SeedSegment(ChebSeries::interpolate(lo, hi, acc), ydot0);
        if (diff < tol / 10 * scale) break;
    }

    const double dlo = std::min(0.0, t_end), dhi = std::max(0.0, t_end);
    if (tau >= std::abs(t_end)) return DenseSolution(seg, {}, dlo, dhi);
    Sample s0 = seg.eval(dir * tau);
    Rhs2 f = [&c, lam](double t, const State2& y) {
        return State2{y[1], 4.0 * lam * (t * y[1] - y[0]) / (t * t) + c.alpha(t) * y[0] / t + c.beta(t) * y[1] + c.sigma(t)};
    };
    StepperOptions opt;
    opt.rtol = opt.atol = stepper_tol(tol);
    opt.breakpoints = breakpoints;
    StepperResult r = dop853(f, dir * tau, {s0.x, s0.xdot}, t_end, opt);
    if (!r.completed)
        throw BlowUp("variational integration stopped at t=" + std::to_string(r.t_reached) + ": " + r.failure,
                     r.t_reached);
    return DenseSolution(seg, std::move(r.segments), dlo, dhi);
}

}  // namespace minres
