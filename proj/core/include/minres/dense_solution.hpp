#pragma once

#include <memory>
#include <vector>

#include "minres/chebyshev.hpp"
#include "minres/dop853.hpp"

namespace minres {

struct Sample {
    double x;
    double xdot;
    double xddot;
};

// Solution near the singular point t=0, with x(0)=0 and xdot(0)=v0. The acceleration is a
// Chebyshev series; value and velocity come from
//   x = v0 t + t^2 W(t),  xdot = v0 + t U(t),
//   U(t) = int_0^1 a(t s) ds,  W(t) = int_0^1 (1-s) a(t s) ds,
// so quotients like xdot^2/x never cancel.
class SeedSegment {
public:
    SeedSegment() = default;
    SeedSegment(ChebSeries accel, double v0);

    [[nodiscard]] double lo() const { return accel_.lo(); }
    [[nodiscard]] double hi() const { return accel_.hi(); }
    [[nodiscard]] double v0() const { return v0_; }
    [[nodiscard]] const ChebSeries& accel() const { return accel_; }

    [[nodiscard]] Sample eval(double t) const;
    // U(t) and W(t) as above.
    void moments(double t, double& u, double& w) const;
    // d(xddot)/dt
    [[nodiscard]] double jerk(double t) const { return jerk_(t); }

private:
    ChebSeries accel_;
    ChebSeries jerk_;
    double v0_ = 0.0;
    std::shared_ptr<const GaussRule> rule_;
};

// Piecewise representation of a trajectory: a seed segment around t=0 plus dense-output
// stepper segments. Immutable; evaluation outside [t_lo, t_hi] throws DomainError.
class DenseSolution {
public:
    DenseSolution() = default;
    DenseSolution(SeedSegment seed, std::vector<RkSegment> steps, double t_lo, double t_hi);

    [[nodiscard]] Sample eval(double t) const;
    [[nodiscard]] double value(double t) const;
    [[nodiscard]] double t_lo() const { return t_lo_; }
    [[nodiscard]] double t_hi() const { return t_hi_; }
    [[nodiscard]] bool contains(double t) const { return t >= t_lo_ && t <= t_hi_; }
    [[nodiscard]] const SeedSegment& seed() const { return seed_; }
    [[nodiscard]] std::size_t step_count() const { return steps_.size(); }
    [[nodiscard]] std::vector<double> breakpoints() const;

private:
    const RkSegment* find_step(double t) const;

    SeedSegment seed_;
    std::vector<RkSegment> steps_;  // ordered by increasing t
    double t_lo_ = 0.0;
    double t_hi_ = 0.0;
};

}  // namespace minres
