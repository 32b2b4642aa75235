#include "minres/dense_solution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "minres/errors.hpp"

namespace minres {

SeedSegment::SeedSegment(ChebSeries accel, double v0)
    : accel_(std::move(accel)), v0_(v0) {
    jerk_ = accel_.derivative();
    const int n = static_cast<int>(accel_.coeffs().size()) / 2 + 2;
    rule_ = std::make_shared<const GaussRule>(gauss_legendre01(n));
}

void SeedSegment::moments(double t, double& u, double& w) const {
    u = 0.0;
    w = 0.0;
    const auto& r = *rule_;
    for (std::size_t i = 0; i < r.x.size(); ++i) {
        double a = accel_(t * r.x[i]);
        u += r.w[i] * a;
        w += r.w[i] * (1.0 - r.x[i]) * a;
    }
}

Sample SeedSegment::eval(double t) const {
    double u, w;
    moments(t, u, w);
    return {v0_ * t + t * t * w, v0_ + t * u, accel_(t)};
}

DenseSolution::DenseSolution(SeedSegment seed, std::vector<RkSegment> steps, double t_lo, double t_hi)
    : seed_(std::move(seed)), steps_(std::move(steps)), t_lo_(t_lo), t_hi_(t_hi) {
    std::sort(steps_.begin(), steps_.end(), [](const RkSegment& a, const RkSegment& b) {
        return std::min(a.t0, a.t1()) < std::min(b.t0, b.t1());
    });
}

const RkSegment* DenseSolution::find_step(double t) const {
    auto it = std::upper_bound(steps_.begin(), steps_.end(), t, [](double v, const RkSegment& s) {
        return v < std::min(s.t0, s.t1());
    });
    if (it == steps_.begin()) return nullptr;
    --it;
    if (t > std::max(it->t0, it->t1())) return nullptr;
    return &*it;
}

Sample DenseSolution::eval(double t) const {
    if (!contains(t))
        throw DomainError("evaluation at t=" + std::to_string(t) + " outside [" + std::to_string(t_lo_) +
                          ", " + std::to_string(t_hi_) + "]");
    if (t >= seed_.lo() && t <= seed_.hi()) return seed_.eval(t);
    const RkSegment* s = find_step(t);
    if (!s) throw DomainError("no segment covers t=" + std::to_string(t));
    Sample out{};
    double dummy, ddx;
    s->eval(t, 0, out.x, dummy, ddx);
    s->eval(t, 1, out.xdot, out.xddot, ddx);
    return out;
}

double DenseSolution::value(double t) const {
    if (!contains(t)) throw DomainError("evaluation at t=" + std::to_string(t) + " outside domain");
    if (t >= seed_.lo() && t <= seed_.hi()) return seed_.eval(t).x;
    const RkSegment* s = find_step(t);
    if (!s) throw DomainError("no segment covers t=" + std::to_string(t));
    return s->value(t, 0);
}

std::vector<double> DenseSolution::breakpoints() const {
    std::vector<double> b{seed_.lo(), seed_.hi()};
    for (const auto& s : steps_) {
        b.push_back(s.t0);
        b.push_back(s.t1());
    }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    b.erase(std::remove_if(b.begin(), b.end(), [&](double v) { return !contains(v); }), b.end());
    return b;
}

}  // namespace minres
