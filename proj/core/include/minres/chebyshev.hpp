#pragma once

#include <vector>

namespace minres {

// Chebyshev series on [lo, hi].
class ChebSeries {
public:
    ChebSeries() = default;
    ChebSeries(double lo, double hi, std::vector<double> coeffs);

    // First-kind Chebyshev points mapped to [lo, hi], in increasing order.
    static std::vector<double> nodes(double lo, double hi, int n);
    // Interpolant through values sampled at nodes(lo, hi, values.size()).
    static ChebSeries interpolate(double lo, double hi, const std::vector<double>& values);

    [[nodiscard]] double operator()(double t) const;
    [[nodiscard]] ChebSeries derivative() const;

    [[nodiscard]] double lo() const { return lo_; }
    [[nodiscard]] double hi() const { return hi_; }
    [[nodiscard]] const std::vector<double>& coeffs() const { return c_; }

private:
    double lo_ = -1.0;
    double hi_ = 1.0;
    std::vector<double> c_;
};

struct GaussRule {
    std::vector<double> x;  // on [0, 1]
    std::vector<double> w;
};

// n-point Gauss-Legendre rule on [0, 1].
GaussRule gauss_legendre01(int n);

}  // namespace minres
