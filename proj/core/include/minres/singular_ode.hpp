#pragma once

#include <functional>
#include <vector>

#include "minres/dense_solution.hpp"

namespace minres {

using Field3 = std::function<double(double t, double x, double xdot)>;
using Field1 = std::function<double(double t)>;

// xddot = lambda xdot^2 / x + g(t, x, xdot),  x(0) = 0, xdot(0) = 0.
class SingularIvp {
public:
    SingularIvp(double lambda, Field3 g, Field3 g_x, Field3 g_xdot);

    [[nodiscard]] double lambda() const { return lambda_; }
    [[nodiscard]] double g(double t, double x, double xdot) const { return g_(t, x, xdot); }
    [[nodiscard]] double g_x(double t, double x, double xdot) const { return g_x_(t, x, xdot); }
    [[nodiscard]] double g_xdot(double t, double x, double xdot) const { return g_xdot_(t, x, xdot); }
    [[nodiscard]] double g_origin() const { return g_origin_; }
    [[nodiscard]] double rhs(double t, double x, double xdot) const {
        return lambda_ * xdot * xdot / x + g_(t, x, xdot);
    }

private:
    double lambda_;
    Field3 g_, g_x_, g_xdot_;
    double g_origin_;
};

[[nodiscard]] double accel_at_origin(const SingularIvp& ivp);

struct SeedOptions {
    double tol = 1e-10;
    int nodes = 20;
    int max_iterations = 200;
    double tau_max = 0.5;
    int side = 0;  // 0: [-tau, tau]; +1: [0, tau]; -1: [-tau, 0]
};

struct PicardSeed {
    double tau;
    double epsilon;
    double rho0;         // contraction target
    double contraction;  // bound rho(tau, epsilon) actually certified
    std::vector<double> history;  // sup |a_{k+1} - a_k| per iteration
    DenseSolution seed;
};

// Fixed point of the integral map on a short interval around t=0. epsilon <= 0 picks the
// largest epsilon in {0.1, 0.05, 0.025, ...} whose lambda term leaves room below rho0.
PicardSeed picard_seed(const SingularIvp& ivp, double epsilon, const SeedOptions& opt = {});

// Seed on [0, +-tau] followed by adaptive DOP853 stepping to t_end.
DenseSolution integrate(const SingularIvp& ivp, double t_end, double tol = 1e-10);

// |xddot - lambda xdot^2/x - g| of a returned solution at t.
[[nodiscard]] double ode_residual(const SingularIvp& ivp, const DenseSolution& sol, double t);

// ydd = 4 lambda (t yd - y)/t^2 + alpha(t) y/t + beta(t) yd + sigma(t)
class VariationalCoeffs {
public:
    VariationalCoeffs(double lambda, Field1 alpha, Field1 beta, Field1 sigma);

    [[nodiscard]] double lambda() const { return lambda_; }
    [[nodiscard]] double alpha(double t) const { return alpha_(t); }
    [[nodiscard]] double beta(double t) const { return beta_(t); }
    [[nodiscard]] double sigma(double t) const { return sigma_(t); }

private:
    double lambda_;
    Field1 alpha_, beta_, sigma_;
};

[[nodiscard]] double variational_accel_at_origin(const VariationalCoeffs& c, double ydot0);

DenseSolution integrate_variational(const VariationalCoeffs& c, double ydot0, double t_end,
                                    double tol = 1e-10, const std::vector<double>& breakpoints = {});

}  // namespace minres
