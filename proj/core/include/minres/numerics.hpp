#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>

namespace minres::num {

using Fn1 = std::function<double(double)>;

struct QuadResult {
    double value;
    double error;
};

// Adaptive Gauss-Kronrod quadrature aiming at an absolute error of abs_tol.
// Endpoints are never evaluated.
QuadResult integrate(const Fn1& f, double a, double b, double abs_tol = 1e-12);

struct Bracket {
    double lo;
    double hi;
};

// Walks outward from guess in steps of `step` (growing geometrically) and returns the
// sign-change interval closest to guess within [lo_limit, hi_limit].
std::optional<Bracket> bracket_near(const Fn1& f, double guess, double lo_limit, double hi_limit,
                                    double step);

// Root of f in [lo, hi]; requires f(lo) * f(hi) <= 0. Stops when the bracket is below
// x_tol or |f| < f_tol.
double solve_bracketed(const Fn1& f, double lo, double hi, double x_tol, double f_tol = 0.0,
                       int max_iter = 200);

struct Extremum {
    double arg;
    double value;
};

// Golden-section search for the maximum of a unimodal function on [lo, hi].
Extremum golden_max(const Fn1& f, double lo, double hi, int iterations = 80);

// Worker count: hardware concurrency capped by NEWTON_MINRES_THREADS when set.
unsigned thread_count();

// Runs body(i) for i in [0, n) on up to thread_count() threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace minres::num
