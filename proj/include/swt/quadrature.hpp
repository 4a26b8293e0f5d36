#pragma once

#include <functional>

namespace swt {

/// Globally adaptive Simpson on [a, b] with a hard evaluation budget:
/// panels are refined worst-error-first until the accumulated error is below
/// tol relative to the integral. Non-finite endpoint values (integrable
/// singularities) are nudged inward.
double integrate(const std::function<double(double)>& f, double a, double b, double tol,
                 int budget = 4096);

/// Integral over [a, b] of (x - a)^gamma * h(x) with gamma in (-1, 0]:
/// the power substitution s = (x-a)^(gamma+1) removes the singularity.
double integrate_power_left(const std::function<double(double)>& h, double a, double b,
                            double gamma, double tol, int budget = 4096);

/// Integral over [a, b] of (b - x)^gamma * h(x) with gamma in (-1, 0].
double integrate_power_right(const std::function<double(double)>& h, double a, double b,
                             double gamma, double tol, int budget = 4096);

/// Integral over [c, inf) of f, where f decays at least like x^(-1-delta)
/// with delta > 0; maps through x = c/t onto (0, 1] and neutralizes the
/// residual power behavior t^(delta-1) at t = 0.
double integrate_tail(const std::function<double(double)>& f, double c, double delta,
                      double tol, int budget = 4096);

} // namespace swt
