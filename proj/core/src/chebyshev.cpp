#include "minres/chebyshev.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace minres {

ChebSeries::ChebSeries(double lo, double hi, std::vector<double> coeffs)
    : lo_(lo), hi_(hi), c_(std::move(coeffs)) {
    if (!(hi > lo)) throw std::invalid_argument("ChebSeries: empty interval");
}

std::vector<double> ChebSeries::nodes(double lo, double hi, int n) {
    std::vector<double> t(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        double s = -std::cos(std::numbers::pi * (k + 0.5) / n);
        t[static_cast<std::size_t>(k)] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * s;
    }
    return t;
}

ChebSeries ChebSeries::interpolate(double lo, double hi, const std::vector<double>& values) {
    const int n = static_cast<int>(values.size());
    std::vector<double> c(values.size(), 0.0);
    for (int j = 0; j < n; ++j) {
        double sum = 0.0;
        for (int k = 0; k < n; ++k) {
            // nodes are ordered with s_k = -cos(theta_k), so T_j(s_k) = (-1)^j cos(j theta_k)
            double theta = std::numbers::pi * (k + 0.5) / n;
            sum += values[static_cast<std::size_t>(k)] * std::cos(j * theta);
        }
        double sign = (j % 2 == 0) ? 1.0 : -1.0;
        c[static_cast<std::size_t>(j)] = sign * sum * (j == 0 ? 1.0 : 2.0) / n;
    }
    return ChebSeries(lo, hi, std::move(c));
}

double ChebSeries::operator()(double t) const {
    const double s = (2.0 * t - lo_ - hi_) / (hi_ - lo_);
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t k = c_.size(); k-- > 1;) {
        double b0 = 2.0 * s * b1 - b2 + c_[k];
        b2 = b1;
        b1 = b0;
    }
    return s * b1 - b2 + (c_.empty() ? 0.0 : c_[0]);
}

ChebSeries ChebSeries::derivative() const {
    const std::size_t n = c_.size();
    if (n <= 1) return ChebSeries(lo_, hi_, {0.0});
    std::vector<double> d(n - 1, 0.0);
    // c'_{k-1} = c'_{k+1} + 2 k c_k
    for (std::size_t k = n - 1; k >= 1; --k) {
        double next = (k + 1 < n - 1) ? d[k + 1] : 0.0;
        d[k - 1] = next + 2.0 * static_cast<double>(k) * c_[k];
    }
    d[0] *= 0.5;
    const double scale = 2.0 / (hi_ - lo_);
    for (double& v : d) v *= scale;
    return ChebSeries(lo_, hi_, std::move(d));
}

GaussRule gauss_legendre01(int n) {
    GaussRule rule;
    rule.x.resize(static_cast<std::size_t>(n));
    rule.w.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
            double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        if (n == 1) p0 = 1.0;
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        auto idx = static_cast<std::size_t>(i);
        rule.x[idx] = 0.5 * (1.0 - z);
        rule.w[idx] = 1.0 / ((1.0 - z * z) * dp * dp);
    }
    return rule;
}

}  // namespace minres
