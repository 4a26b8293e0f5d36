#include "swt/stable.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "swt/errors.hpp"

namespace swt {

void StableParams::validate() const {
    if (!(alpha > 0.0) || !(alpha <= 2.0))
        throw ParameterError("stable alpha must lie in (0, 2], got " + std::to_string(alpha));
    if (!(scale > 0.0))
        throw ParameterError("stable scale must be positive, got " + std::to_string(scale));
}

void DiscreteKernel::validate() const {
    if (value.empty()) throw ParameterError("kernel atom set is empty");
    if (mass.size() != value.size())
        throw ShapeError("kernel mass/value lengths differ");
    for (double m : mass)
        if (!(m > 0.0)) throw ParameterError("kernel atom masses must be positive");
}

double signed_power(double a, double p) {
    if (a == 0.0) {
        if (p <= 0.0) throw ParameterError("signed_power: 0 cannot be raised to p <= 0");
        return 0.0;
    }
    const double mag = std::pow(std::abs(a), p);
    return a > 0.0 ? mag : -mag;
}

double sample_sas_standard(double alpha, Xoshiro256pp& rng) {
    const double theta = 0.5 * std::numbers::pi * rng.uniform_sym(); // (-pi/2, pi/2)
    if (alpha == 1.0) return std::tan(theta); // exact Cauchy branch
    const double w = -std::log(rng.uniform01());
    const double a = alpha * theta;
    const double s = std::sin(a) / std::pow(std::cos(theta), 1.0 / alpha);
    const double t = std::pow(std::cos(theta - a) / w, (1.0 - alpha) / alpha);
    return s * t;
}

std::vector<double> sample_sas(const StableParams& params, RngStream stream, std::size_t n) {
    params.validate();
    if (n == 0) throw ParameterError("sample_sas: n must be >= 1");
    Xoshiro256pp rng(stream);
    std::vector<double> out(n);
    for (double& x : out) x = params.scale * sample_sas_standard(params.alpha, rng);
    return out;
}

double alpha_norm_pow(const DiscreteKernel& k, double alpha) {
    double s = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i)
        s += k.mass[i] * std::pow(std::abs(k.value[i]), alpha);
    return s;
}

double alpha_norm(const DiscreteKernel& k, double alpha) {
    if (!(alpha > 0.0 && alpha <= 2.0))
        throw ParameterError("alpha_norm: alpha must lie in (0, 2]");
    k.validate();
    return std::pow(alpha_norm_pow(k, alpha), 1.0 / alpha);
}

namespace {

void require_shared_atoms(const DiscreteKernel& f, const DiscreteKernel& g) {
    if (f.size() != g.size())
        throw ShapeError("kernels do not share an atom index set (sizes differ)");
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f.mass[i] != g.mass[i])
            throw ShapeError("kernels do not share an atom index set (masses differ)");
}

} // namespace

double joint_char_fn(const DiscreteKernel& f, const DiscreteKernel& g, double alpha,
                     double u, double v) {
    f.validate();
    g.validate();
    require_shared_atoms(f, g);
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        s += f.mass[i] * std::pow(std::abs(u * f.value[i] + v * g.value[i]), alpha);
    return std::exp(-s);
}

std::vector<std::vector<double>> sample_joint(const std::vector<DiscreteKernel>& kernels,
                                              double alpha, RngStream stream, std::size_t n) {
    if (kernels.empty()) throw ParameterError("sample_joint: no kernels given");
    if (n == 0) throw ParameterError("sample_joint: n must be >= 1");
    StableParams{alpha, 1.0}.validate();
    for (const auto& k : kernels) {
        k.validate();
        require_shared_atoms(kernels.front(), k);
    }
    const std::size_t m = kernels.front().size();
    const double inv_alpha = 1.0 / alpha;
    std::vector<double> root_mass(m);
    for (std::size_t i = 0; i < m; ++i)
        root_mass[i] = std::pow(kernels.front().mass[i], inv_alpha);

    Xoshiro256pp rng(stream);
    std::vector<std::vector<double>> rows(n, std::vector<double>(kernels.size(), 0.0));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t i = 0; i < m; ++i) {
            const double z = root_mass[i] * sample_sas_standard(alpha, rng);
            for (std::size_t c = 0; c < kernels.size(); ++c)
                rows[r][c] += kernels[c].value[i] * z;
        }
    }
    return rows;
}

} // namespace swt
