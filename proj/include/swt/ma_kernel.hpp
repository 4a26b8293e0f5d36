#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "swt/depmeas.hpp"

namespace swt {

/// Moving-average kernel a(.). Registered families carry analytic tail and
/// summability verdicts; custom kernels are handled numerically.
struct MaKernel {
    enum class Family { PowerLaw, Indicator, Custom };

    Family family = Family::Indicator;
    double power = 2.5;          // PowerLaw: a(x) = x^-power for x >= 1
    double lo = 0.0, hi = 1.0;   // Indicator: a = 1 on [lo, hi)
    std::function<double(double)> fn; // Custom
    double custom_support_left = 0.0;
    double custom_horizon = 0.0; // 0 = derive numerically

    double operator()(double x) const;
    /// Largest x0 with a(x) = 0 for all x < x0.
    double support_left() const;
    std::string describe() const;

    static MaKernel power_law(double p);
    static MaKernel indicator(double lo = 0.0, double hi = 1.0);
    static MaKernel custom(std::function<double(double)> fn, double support_left,
                           double horizon = 0.0);
};

/// A stationary SaS moving average xi_n = integral a(n - x) M(dx) together
/// with the discretization parameters used for kernel-pair construction and
/// simulation.
struct MovingAverageSpec {
    MaKernel a;
    double alpha = 1.5;
    double causal_shift = 0.0; // x0 <= 0; a must vanish left of it
    double delta = 1.0 / 64.0; // quadrature grid step
    double horizon = 0.0;      // truncation T; 0 = auto from tail_tol
    double tail_tol = 1e-6;    // truncated alpha-mass relative to the total

    void validate() const;
    /// Effective truncation horizon (auto-derived when horizon == 0).
    double effective_horizon() const;
    /// sum |a|^alpha over the grid up to the effective horizon.
    double alpha_mass() const;
};

/// Kernel pair of (xi_0, xi_n): f(x) = a(-x), g(x) = a(n - x), discretized by
/// midpoint cells of width delta; atoms where both kernels vanish are pruned.
KernelPair ma_kernel_pair(const MovingAverageSpec& spec, long n);

/// Verdicts on the block-sum conditions that drive the central limit theorem
/// for functionals of the moving average: convergence of
/// sum_m (int_{m-1}^m |a|^alpha)^e for e = 1/2 (controls the m2 series) and
/// e = (alpha-1)/alpha (controls the m1 series).
struct SummabilityReport {
    bool sqrt_blocks_converge = false; // exponent 1/2
    bool m1_blocks_converge = false;   // exponent (alpha-1)/alpha
    bool heuristic = true;             // verdicts from finite partial sums only
    double partial_sum_sqrt = 0.0;
    double partial_sum_m1 = 0.0;
    double block_decay_exponent = 0.0; // fitted q in block_m ~ m^-q
    std::optional<bool> analytic_sqrt; // exact verdicts for known families
    std::optional<bool> analytic_m1;

    bool clt_hypothesis() const {
        return (analytic_sqrt.value_or(sqrt_blocks_converge)) &&
               (analytic_m1.value_or(m1_blocks_converge));
    }
};

SummabilityReport check_summability(const MovingAverageSpec& spec, std::size_t max_m);

} // namespace swt
