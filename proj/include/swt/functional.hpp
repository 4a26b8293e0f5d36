#pragma once

#include <functional>
#include <optional>
#include <string>

namespace swt {

/// Registered functionals K applied to stable variables. Each registered
/// kind satisfies the growth / monotonicity / local-integrability assumptions
/// behind the covariance bounds: |K(x)| <= C|x|^beta for large |x| with
/// beta < alpha/2, K(x)/x monotone beyond a threshold, and K integrable
/// around any interior pole. Arbitrary user functions are accepted only with
/// an explicit acknowledgement that those assumptions are unchecked.
struct FunctionalSpec {
    enum class Kind { Log2Abs, AbsPow, BoundedClip, Indicator, Custom };

    Kind kind = Kind::Log2Abs;
    double beta = 0.4;  // AbsPow exponent; growth exponent for Custom
    double clip = 1.0;  // BoundedClip level
    double lo = 0.0, hi = 1.0; // Indicator interval
    std::function<double(double)> fn; // Custom
    bool assumptions_unchecked = false; // must be set for Custom

    double operator()(double x) const;
    bool bounded() const;
    /// Growth exponent for the tail bound checks (0 for bounded kinds).
    double growth_beta() const;
    void validate(double alpha) const;
    std::string describe() const;

    /// Exact E K(X) for X SaS(alpha, sigma) where a closed form exists:
    /// log2|X| and |X|^beta (any alpha), clip (odd, zero mean), and the
    /// positive half-line indicator.
    std::optional<double> analytic_mean(double alpha, double sigma) const;

    static FunctionalSpec log2abs();
    static FunctionalSpec abs_pow(double beta);
    static FunctionalSpec bounded_clip(double c);
    static FunctionalSpec indicator(double lo, double hi);
    /// growth_beta bounds |fn| at infinity; the caller certifies nothing
    /// else, so acknowledge_unchecked must be true.
    static FunctionalSpec custom(std::function<double(double)> fn, double growth_beta,
                                 bool acknowledge_unchecked);
};

/// E |X|^p for X SaS(alpha, 1), -1 < p < alpha.
double sas_abs_moment(double alpha, double p);

/// E ln|X| for X SaS(alpha, 1).
double sas_log_moment(double alpha);

} // namespace swt
