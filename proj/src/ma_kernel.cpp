#include "swt/ma_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "swt/errors.hpp"

namespace swt {

double MaKernel::operator()(double x) const {
    switch (family) {
        case Family::PowerLaw:
            return x >= 1.0 ? std::pow(x, -power) : 0.0;
        case Family::Indicator:
            return (x >= lo && x < hi) ? 1.0 : 0.0;
        case Family::Custom:
            return x < custom_support_left ? 0.0 : fn(x);
    }
    return 0.0;
}

double MaKernel::support_left() const {
    switch (family) {
        case Family::PowerLaw: return 1.0;
        case Family::Indicator: return lo;
        case Family::Custom: return custom_support_left;
    }
    return 0.0;
}

std::string MaKernel::describe() const {
    switch (family) {
        case Family::PowerLaw: return "power-law x^-" + std::to_string(power) + " on [1,inf)";
        case Family::Indicator:
            return "indicator on [" + std::to_string(lo) + "," + std::to_string(hi) + ")";
        case Family::Custom: return "custom";
    }
    return "?";
}

MaKernel MaKernel::power_law(double p) {
    if (!(p > 0.0)) throw ParameterError("power-law kernel requires p > 0");
    MaKernel k;
    k.family = Family::PowerLaw;
    k.power = p;
    return k;
}

MaKernel MaKernel::indicator(double lo, double hi) {
    if (!(lo < hi)) throw ParameterError("indicator kernel requires lo < hi");
    MaKernel k;
    k.family = Family::Indicator;
    k.lo = lo;
    k.hi = hi;
    return k;
}

MaKernel MaKernel::custom(std::function<double(double)> fn, double support_left,
                          double horizon) {
    MaKernel k;
    k.family = Family::Custom;
    k.fn = std::move(fn);
    k.custom_support_left = support_left;
    k.custom_horizon = horizon;
    return k;
}

void MovingAverageSpec::validate() const {
    if (!(alpha > 1.0 && alpha < 2.0))
        throw ParameterError("moving average alpha must lie in (1, 2)");
    if (!(delta > 0.0)) throw ParameterError("moving average delta must be positive");
    if (causal_shift > 0.0) throw ParameterError("causal shift must be <= 0");
    if (a.support_left() < causal_shift)
        throw ParameterError("non-causal kernel: a(x) != 0 left of the causal shift");
    if (!(tail_tol > 0.0 && tail_tol < 1.0))
        throw ParameterError("tail tolerance must lie in (0, 1)");
}

namespace {

// Midpoint quadrature of |a|^alpha over [lo, hi).
double block_alpha_mass(const MaKernel& a, double alpha, double lo, double hi, double delta) {
    const long cells = std::max(1L, std::lround((hi - lo) / delta));
    const double h = (hi - lo) / static_cast<double>(cells);
    double s = 0.0;
    for (long i = 0; i < cells; ++i)
        s += std::pow(std::abs(a(lo + (static_cast<double>(i) + 0.5) * h)), alpha);
    return s * h;
}

} // namespace

double MovingAverageSpec::effective_horizon() const {
    validate();
    if (horizon > 0.0) return horizon;
    switch (a.family) {
        case MaKernel::Family::Indicator:
            return std::max(1.0, a.hi);
        case MaKernel::Family::PowerLaw: {
            // Tail integral of x^(-p*alpha) beyond Y relative to the total on
            // [1, inf) is Y^(1 - p*alpha).
            const double q = a.power * alpha - 1.0;
            if (!(q > 0.0)) throw ConfigError("power-law kernel is not alpha-integrable");
            return std::pow(tail_tol, -1.0 / q);
        }
        case MaKernel::Family::Custom: {
            if (a.custom_horizon > 0.0) return a.custom_horizon;
            // Doubling blocks with a geometric tail bound from the last ratio.
            double lo = a.support_left();
            double width = std::max(1.0, std::abs(lo) + 1.0);
            double total = 0.0, prev = -1.0;
            for (int iter = 0; iter < 60; ++iter) {
                const double blk = block_alpha_mass(a, alpha, lo, lo + width, delta);
                total += blk;
                if (prev >= 0.0 && blk > 0.0) {
                    const double r = blk / prev;
                    if (r < 0.9) {
                        const double tail_bound = blk * r / (1.0 - r);
                        if (tail_bound < tail_tol * total) return lo + width;
                    }
                } else if (prev == 0.0 && blk == 0.0 && total > 0.0) {
                    return lo; // compact support, fully covered
                }
                prev = blk;
                lo += width;
                width *= 2.0;
            }
            throw ConfigError("could not certify the truncation horizon of a custom kernel");
        }
    }
    throw ConfigError("unknown kernel family");
}

double MovingAverageSpec::alpha_mass() const {
    const double T = effective_horizon();
    return block_alpha_mass(a, alpha, a.support_left(), T, delta);
}

KernelPair ma_kernel_pair(const MovingAverageSpec& spec, long n) {
    spec.validate();
    if (n < 0) throw ParameterError("ma_kernel_pair: lag n must be >= 0");
    const double T = spec.effective_horizon();
    const double s_left = spec.a.support_left();
    // f(x) = a(-x) lives on [-T, -s_left]; g(x) = a(n - x) on [n - T, n - s_left].
    const double lo = -T;
    const double hi = static_cast<double>(n) - s_left;
    const long cells = std::max(1L, std::lround((hi - lo) / spec.delta));
    const double h = (hi - lo) / static_cast<double>(cells);

    KernelPair p;
    p.alpha = spec.alpha;
    for (long i = 0; i < cells; ++i) {
        const double x = lo + (static_cast<double>(i) + 0.5) * h;
        const double fv = spec.a(-x);
        const double gv = spec.a(static_cast<double>(n) - x);
        if (fv == 0.0 && gv == 0.0) continue;
        p.f.mass.push_back(h);
        p.f.value.push_back(fv);
        p.g.mass.push_back(h);
        p.g.value.push_back(gv);
    }
    if (p.f.size() == 0) throw ConfigError("ma_kernel_pair: empty discretization");
    return p;
}

SummabilityReport check_summability(const MovingAverageSpec& spec, std::size_t max_m) {
    spec.validate();
    if (max_m < 8) throw ParameterError("check_summability: max_m must be >= 8");
    SummabilityReport rep;
    const double e_m1 = (spec.alpha - 1.0) / spec.alpha;

    std::vector<double> blocks(max_m);
    const double s_left = spec.a.support_left();
    for (std::size_t m = 1; m <= max_m; ++m) {
        const double lo = std::max(s_left, static_cast<double>(m) - 1.0);
        const double hi = static_cast<double>(m);
        blocks[m - 1] = lo < hi ? block_alpha_mass(spec.a, spec.alpha, lo, hi, spec.delta) : 0.0;
        rep.partial_sum_sqrt += std::pow(blocks[m - 1], 0.5);
        rep.partial_sum_m1 += std::pow(blocks[m - 1], e_m1);
    }

    // Heuristic verdict: fit block_m ~ m^-q over the top half of nonzero
    // blocks; the sum with exponent e converges iff q * e > 1.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t used = 0;
    for (std::size_t m = max_m / 2; m <= max_m; ++m) {
        const double b = blocks[m - 1];
        if (b <= 0.0) continue;
        const double x = std::log(static_cast<double>(m));
        const double y = std::log(b);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++used;
    }
    bool compact_tail = used == 0; // all top blocks vanish
    if (compact_tail) {
        rep.block_decay_exponent = std::numeric_limits<double>::infinity();
        rep.sqrt_blocks_converge = true;
        rep.m1_blocks_converge = true;
    } else {
        const double denom = static_cast<double>(used) * sxx - sx * sx;
        const double q = denom != 0.0 ? -((static_cast<double>(used) * sxy - sx * sy) / denom)
                                      : 0.0;
        rep.block_decay_exponent = q;
        rep.sqrt_blocks_converge = q * 0.5 > 1.0;
        rep.m1_blocks_converge = q * e_m1 > 1.0;
    }

    switch (spec.a.family) {
        case MaKernel::Family::PowerLaw: {
            const double p = spec.a.power;
            rep.analytic_sqrt = p * spec.alpha * 0.5 > 1.0;
            rep.analytic_m1 = p * (spec.alpha - 1.0) > 1.0;
            rep.heuristic = false;
            break;
        }
        case MaKernel::Family::Indicator:
            rep.analytic_sqrt = true;
            rep.analytic_m1 = true;
            rep.heuristic = false;
            break;
        case MaKernel::Family::Custom:
            rep.heuristic = true;
            break;
    }
    return rep;
}

} // namespace swt
