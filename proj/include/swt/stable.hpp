#pragma once

#include <cstddef>
#include <vector>

#include "swt/rng.hpp"

namespace swt {

/// Parameters of a symmetric alpha-stable law: characteristic function
/// exp(-(scale^alpha) |theta|^alpha).
struct StableParams {
    double alpha = 2.0;
    double scale = 1.0;

    void validate() const; // throws ParameterError
};

/// Finite atomic kernel: atoms i carry control mass mass[i] > 0 and kernel
/// value value[i]. Kernels combined in one computation must share the same
/// atom index set (same size, same masses).
struct DiscreteKernel {
    std::vector<double> mass;
    std::vector<double> value;

    std::size_t size() const { return value.size(); }
    void validate() const; // throws ParameterError / ShapeError
};

/// sign(a) * |a|^p. Zero at a = 0 for p > 0; domain error for a = 0, p <= 0.
double signed_power(double a, double p);

/// One standard SaS(alpha, 1) variate (Chambers-Mallows-Stuck transform;
/// alpha = 1 uses the exact Cauchy tan branch).
double sample_sas_standard(double alpha, Xoshiro256pp& rng);

/// n i.i.d. SaS(alpha, scale) samples, deterministic given (params, stream).
std::vector<double> sample_sas(const StableParams& params, RngStream stream, std::size_t n);

/// (sum_i mass[i] |value[i]|^alpha)^(1/alpha), the scale coefficient of the
/// stable integral of the kernel.
double alpha_norm(const DiscreteKernel& k, double alpha);

/// sum_i mass[i] |value[i]|^alpha (the alpha-th power, used pervasively).
double alpha_norm_pow(const DiscreteKernel& k, double alpha);

/// Joint characteristic function E exp(i(u xi + v eta)) =
/// exp(-||u f + v g||_alpha^alpha) for the pair of stable integrals.
double joint_char_fn(const DiscreteKernel& f, const DiscreteKernel& g, double alpha,
                     double u, double v);

/// n joint draws of the stable integrals of the given kernels over one
/// shared atomic random measure: row r holds (sum_i f_i m_i^(1/alpha) Z_i^r, ...)
/// with Z^r i.i.d. SaS(alpha, 1).
std::vector<std::vector<double>> sample_joint(const std::vector<DiscreteKernel>& kernels,
                                              double alpha, RngStream stream, std::size_t n);

} // namespace swt
