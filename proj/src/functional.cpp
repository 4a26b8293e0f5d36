#include "swt/functional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "swt/errors.hpp"

namespace swt {

namespace {
constexpr double euler_gamma = 0.577215664901532861;
}

double sas_abs_moment(double alpha, double p) {
    if (!(p > -1.0 && p < alpha))
        throw ParameterError("sas_abs_moment: moment order must lie in (-1, alpha)");
    if (p == 0.0) return 1.0;
    return std::pow(2.0, p) * std::tgamma(0.5 * (p + 1.0)) * std::tgamma(1.0 - p / alpha) /
           (std::tgamma(1.0 - 0.5 * p) * std::sqrt(std::numbers::pi));
}

double sas_log_moment(double alpha) { return euler_gamma * (1.0 / alpha - 1.0); }

double FunctionalSpec::operator()(double x) const {
    switch (kind) {
        case Kind::Log2Abs:
            if (x == 0.0) return -std::numeric_limits<double>::infinity();
            return std::log2(std::abs(x));
        case Kind::AbsPow:
            return std::pow(std::abs(x), beta);
        case Kind::BoundedClip:
            return std::clamp(x, -clip, clip);
        case Kind::Indicator:
            return (x >= lo && x < hi) ? 1.0 : 0.0;
        case Kind::Custom:
            return fn(x);
    }
    return 0.0;
}

bool FunctionalSpec::bounded() const {
    return kind == Kind::BoundedClip || kind == Kind::Indicator ||
           (kind == Kind::AbsPow && beta <= 0.0);
}

double FunctionalSpec::growth_beta() const {
    if (kind == Kind::Custom) return beta > 0.0 ? beta : 0.0;
    return kind == Kind::AbsPow && beta > 0.0 ? beta : 0.0;
}

void FunctionalSpec::validate(double alpha) const {
    switch (kind) {
        case Kind::Log2Abs:
            break;
        case Kind::AbsPow:
            if (!(beta > -1.0 && beta < 0.5 * alpha))
                throw ParameterError("functional |x|^beta requires beta in (-1, alpha/2)");
            break;
        case Kind::BoundedClip:
            if (!(clip > 0.0)) throw ParameterError("clip level must be positive");
            break;
        case Kind::Indicator:
            if (!(lo < hi)) throw ParameterError("indicator interval must be nonempty");
            break;
        case Kind::Custom:
            if (!fn) throw ParameterError("custom functional has no function");
            if (!assumptions_unchecked)
                throw ParameterError("custom functionals require acknowledging that the "
                                     "growth/monotonicity assumptions are unchecked");
            if (!(beta < 0.5 * alpha))
                throw ParameterError("custom functional growth exponent must stay below alpha/2");
            break;
    }
}

std::string FunctionalSpec::describe() const {
    switch (kind) {
        case Kind::Log2Abs: return "log2|x|";
        case Kind::AbsPow: return "|x|^" + std::to_string(beta);
        case Kind::BoundedClip: return "clip(x, " + std::to_string(clip) + ")";
        case Kind::Indicator:
            return "1[" + std::to_string(lo) + "," + std::to_string(hi) + ")";
        case Kind::Custom:
            return "custom (assumptions unchecked)";
    }
    return "?";
}

std::optional<double> FunctionalSpec::analytic_mean(double alpha, double sigma) const {
    switch (kind) {
        case Kind::Log2Abs:
            return (std::log(sigma) + sas_log_moment(alpha)) / std::numbers::ln2;
        case Kind::AbsPow:
            return std::pow(sigma, beta) * sas_abs_moment(alpha, beta);
        case Kind::BoundedClip:
            return 0.0; // odd functional of a symmetric variable
        case Kind::Indicator:
            if (lo == 0.0 && hi == std::numeric_limits<double>::infinity()) return 0.5;
            return std::nullopt;
        case Kind::Custom:
            return std::nullopt;
    }
    return std::nullopt;
}

FunctionalSpec FunctionalSpec::log2abs() {
    FunctionalSpec f;
    f.kind = Kind::Log2Abs;
    return f;
}

FunctionalSpec FunctionalSpec::abs_pow(double beta) {
    FunctionalSpec f;
    f.kind = Kind::AbsPow;
    f.beta = beta;
    return f;
}

FunctionalSpec FunctionalSpec::bounded_clip(double c) {
    FunctionalSpec f;
    f.kind = Kind::BoundedClip;
    f.clip = c;
    return f;
}

FunctionalSpec FunctionalSpec::indicator(double lo, double hi) {
    FunctionalSpec f;
    f.kind = Kind::Indicator;
    f.lo = lo;
    f.hi = hi;
    return f;
}

FunctionalSpec FunctionalSpec::custom(std::function<double(double)> fn, double growth_beta,
                                      bool acknowledge_unchecked) {
    FunctionalSpec f;
    f.kind = Kind::Custom;
    f.fn = std::move(fn);
    f.beta = growth_beta;
    f.assumptions_unchecked = acknowledge_unchecked;
    return f;
}

} // namespace swt
