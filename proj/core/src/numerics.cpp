#include "minres/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "minres/errors.hpp"

namespace minres::num {

QuadResult integrate(const Fn1& f, double a, double b, double abs_tol) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    if (a == b) return {0.0, 0.0};
    // One non-adaptive pass gives the L1 scale the adaptive routine measures error against.
    double l1 = 0.0;
    double err = 0.0;
    GK::integrate(f, a, b, 0, 0.0, &err, &l1);
    double rel = abs_tol / std::max(l1, std::numeric_limits<double>::min());
    rel = std::clamp(rel, 1e-15, 1e-6);
    double value = GK::integrate(f, a, b, 20, rel, &err, &l1);
    if (!std::isfinite(value)) throw EvaluationError("quadrature produced a non-finite value");
    return {value, err};
}

std::optional<Bracket> bracket_near(const Fn1& f, double guess, double lo_limit, double hi_limit,
                                    double step) {
    guess = std::clamp(guess, lo_limit, hi_limit);
    const double f0 = f(guess);
    if (f0 == 0.0) return Bracket{guess, guess};
    double left = guess, f_left = f0;
    double right = guess, f_right = f0;
    double h = step;
    bool left_open = true, right_open = true;
    while (left_open || right_open) {
        if (right_open) {
            double next = std::min(right + h, hi_limit);
            double fn = f(next);
            if ((fn > 0) != (f_right > 0) || fn == 0.0) return Bracket{right, next};
            right = next;
            f_right = fn;
            if (next >= hi_limit) right_open = false;
        }
        if (left_open) {
            double next = std::max(left - h, lo_limit);
            double fn = f(next);
            if ((fn > 0) != (f_left > 0) || fn == 0.0) return Bracket{next, left};
            left = next;
            f_left = fn;
            if (next <= lo_limit) left_open = false;
        }
        h *= 1.5;
    }
    return std::nullopt;
}

double solve_bracketed(const Fn1& f, double lo, double hi, double x_tol, double f_tol,
                       int max_iter) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0)) throw NoRoot("interval does not bracket a sign change");
    auto g = [&](double x) {
        double v = f(x);
        return std::abs(v) < f_tol ? 0.0 : v;
    };
    auto stop = [x_tol](double a, double b) { return std::abs(b - a) <= x_tol; };
    std::uintmax_t iters = static_cast<std::uintmax_t>(max_iter);
    auto r = boost::math::tools::toms748_solve(g, lo, hi, flo, fhi, stop, iters);
    double a = r.first, b = r.second;
    double fa = f(a), fb = f(b);
    return std::abs(fa) <= std::abs(fb) ? a : b;
}

Extremum golden_max(const Fn1& f, double lo, double hi, int iterations) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iterations && b - a > 0.0; ++i) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    Extremum best = fc >= fd ? Extremum{c, fc} : Extremum{d, fd};
    for (double x : {lo, hi}) {
        double fx = f(x);
        if (fx > best.value) best = {x, fx};
    }
    return best;
}

unsigned thread_count() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("NEWTON_MINRES_THREADS")) {
        char* end = nullptr;
        long cap = std::strtol(env, &end, 10);
        if (end != env && cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = n;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace minres::num
