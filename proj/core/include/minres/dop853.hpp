#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace minres {

using State2 = std::array<double, 2>;
using Rhs2 = std::function<State2(double, const State2&)>;

// One accepted step with its 7th-order continuous extension.
struct RkSegment {
    double t0 = 0.0;
    double h = 0.0;  // signed
    std::array<State2, 8> r{};

    [[nodiscard]] double t1() const { return t0 + h; }
    // Value, first and second t-derivative of component i at t.
    void eval(double t, int i, double& y, double& dy, double& ddy) const;
    [[nodiscard]] double value(double t, int i) const;
};

struct StepperOptions {
    double rtol = 1e-10;
    double atol = 1e-10;
    double h_initial = 0.0;  // 0 selects automatically
    long max_steps = 200000;
    std::vector<double> breakpoints;  // step boundaries forced exactly at these points
};

struct StepperResult {
    std::vector<RkSegment> segments;
    bool completed = false;
    double t_reached = 0.0;
    std::string failure;
};

// Dormand-Prince 8(5,3) with dense output. `valid` is checked at every stage state; a false
// result or a non-finite derivative shrinks the step, and the run stops with a failure
// once the step collapses.
StepperResult dop853(const Rhs2& f, double t0, State2 y0, double t_end, const StepperOptions& opt,
                     const std::function<bool(double, const State2&)>& valid = {});

}  // namespace minres
