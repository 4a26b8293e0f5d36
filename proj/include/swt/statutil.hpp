#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "swt/errors.hpp"

namespace swt {

inline double mean_of(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

inline double variance_of(const std::vector<double>& xs) {
    const double m = mean_of(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / static_cast<double>(xs.size() - 1);
}

inline double covariance_of(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double mx = mean_of(xs), my = mean_of(ys);
    double s = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (xs[i] - mx) * (ys[i] - my);
    return s / static_cast<double>(xs.size() - 1);
}

/// q-quantile (0..1) by linear interpolation of order statistics.
inline double quantile_of(std::vector<double> xs, double q) {
    if (xs.empty()) throw DiagnosticsError("quantile of empty sample");
    std::sort(xs.begin(), xs.end());
    const double pos = q * static_cast<double>(xs.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= xs.size()) return xs.back();
    const double frac = pos - static_cast<double>(lo);
    return xs[lo] * (1.0 - frac) + xs[lo + 1] * frac;
}

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double se_slope = 0.0;
    std::size_t points = 0;
};

/// Ordinary least squares with the usual residual-based slope standard
/// error; with per-point variances supplied the SE propagates those instead.
inline SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y,
                          const std::vector<double>& y_var = {}) {
    if (x.size() != y.size() || x.size() < 2) throw DiagnosticsError("fit_slope: bad inputs");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double sdenom = sxx - sx * sx / n;
    SlopeFit f;
    f.points = x.size();
    f.slope = (sxy - sx * sy / n) / sdenom;
    f.intercept = (sy - f.slope * sx) / n;
    if (!y_var.empty()) {
        const double xbar = sx / n;
        double v = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double c = (x[i] - xbar) / sdenom;
            v += c * c * y_var[i];
        }
        f.se_slope = std::sqrt(v);
    } else if (x.size() > 2) {
        double rss = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = y[i] - f.intercept - f.slope * x[i];
            rss += r * r;
        }
        f.se_slope = std::sqrt(rss / (n - 2.0) / sdenom);
    }
    return f;
}

/// Kolmogorov-Smirnov distance of a sample from the uniform law on [0,1].
inline double ks_uniform_distance(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double hi = (static_cast<double>(i) + 1.0) / n - xs[i];
        const double lo = xs[i] - static_cast<double>(i) / n;
        d = std::max({d, hi, lo});
    }
    return d;
}

} // namespace swt
