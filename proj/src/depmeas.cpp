#include "swt/depmeas.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "swt/errors.hpp"

namespace swt {

void KernelPair::validate() const {
    f.validate();
    g.validate();
    if (f.size() != g.size())
        throw ShapeError("kernel pair does not share an atom index set (sizes differ)");
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f.mass[i] != g.mass[i])
            throw ShapeError("kernel pair does not share an atom index set (masses differ)");
    if (!(alpha > 0.0 && alpha < 2.0))
        throw ParameterError("kernel pair alpha must lie in (0, 2), got " + std::to_string(alpha));
    if (!(norm_f_pow() > 0.0) || !(norm_g_pow() > 0.0))
        throw ParameterError("kernel pair requires nonzero alpha-norms");
}

double KernelPair::norm_f_pow() const { return alpha_norm_pow(f, alpha); }
double KernelPair::norm_g_pow() const { return alpha_norm_pow(g, alpha); }
double KernelPair::norm_f() const { return std::pow(norm_f_pow(), 1.0 / alpha); }
double KernelPair::norm_g() const { return std::pow(norm_g_pow(), 1.0 / alpha); }

namespace {

void require_alpha_gt1(const KernelPair& p, const char* what) {
    if (!(p.alpha > 1.0))
        throw ParameterError(std::string(what) + " requires alpha in (1, 2), got " +
                             std::to_string(p.alpha));
}

// ||u f + v g||_alpha^alpha over the shared atoms.
double mix_norm_pow(const KernelPair& p, double u, double v) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.f.size(); ++i)
        s += p.f.mass[i] * std::pow(std::abs(u * p.f.value[i] + v * p.g.value[i]), p.alpha);
    return s;
}

} // namespace

double m1_star(const KernelPair& p) {
    require_alpha_gt1(p, "m1_star");
    double s = 0.0;
    for (std::size_t i = 0; i < p.f.size(); ++i) {
        const double fv = std::abs(p.f.value[i]);
        const double gv = std::abs(p.g.value[i]);
        if (fv == 0.0 || gv == 0.0) continue;
        s += p.f.mass[i] * std::pow(fv, p.alpha - 1.0) * gv;
    }
    return s;
}

double m1(const KernelPair& p) {
    KernelPair swapped{p.g, p.f, p.alpha};
    return m1_star(p) + m1_star(swapped);
}

double m2(const KernelPair& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.f.size(); ++i) {
        const double prod = std::abs(p.f.value[i] * p.g.value[i]);
        if (prod == 0.0) continue;
        s += p.f.mass[i] * std::pow(prod, 0.5 * p.alpha);
    }
    return s;
}

double u_measure(const KernelPair& p, double u, double v) {
    return std::exp(-mix_norm_pow(p, u, v)) -
           std::exp(-std::pow(std::abs(u), p.alpha) * p.norm_f_pow() -
                    std::pow(std::abs(v), p.alpha) * p.norm_g_pow());
}

double i_measure(const KernelPair& p, double u, double v) {
    return mix_norm_pow(p, u, v) - std::pow(std::abs(u), p.alpha) * p.norm_f_pow() -
           std::pow(std::abs(v), p.alpha) * p.norm_g_pow();
}

double codifference(const KernelPair& p) { return -i_measure(p, 1.0, -1.0); }

double du_measure(const KernelPair& p, double u, double v) {
    require_alpha_gt1(p, "du_measure");
    const double a = p.alpha;
    double joint_sum = 0.0;  // integral (uf+vg)^<a-1> f dmu
    double single_sum = 0.0; // integral (uf)^<a-1> f dmu
    for (std::size_t i = 0; i < p.f.size(); ++i) {
        const double fv = p.f.value[i];
        const double gv = p.g.value[i];
        const double mi = p.f.mass[i];
        const double mix = u * fv + v * gv;
        if (mix != 0.0 && fv != 0.0) joint_sum += mi * signed_power(mix, a - 1.0) * fv;
        const double uf = u * fv;
        if (uf != 0.0) single_sum += mi * signed_power(uf, a - 1.0) * fv;
    }
    const double e_joint = std::exp(-mix_norm_pow(p, u, v));
    const double e_indep = std::exp(-std::pow(std::abs(u), a) * p.norm_f_pow() -
                                    std::pow(std::abs(v), a) * p.norm_g_pow());
    return -a * joint_sum * e_joint + a * single_sum * e_indep;
}

double dudv_measure(const KernelPair& p, double u, double v) {
    require_alpha_gt1(p, "dudv_measure");
    const double a = p.alpha;
    double sing_sum = 0.0;  // integral |uf+vg|^(a-2) f g dmu
    double joint_f = 0.0;   // integral (uf+vg)^<a-1> f dmu
    double joint_g = 0.0;   // integral (uf+vg)^<a-1> g dmu
    double single_f = 0.0;  // integral (uf)^<a-1> f dmu
    double single_g = 0.0;  // integral (vg)^<a-1> g dmu
    for (std::size_t i = 0; i < p.f.size(); ++i) {
        const double fv = p.f.value[i];
        const double gv = p.g.value[i];
        const double mi = p.f.mass[i];
        const double mix = u * fv + v * gv;
        if (fv != 0.0 && gv != 0.0) {
            // The integrand |uf+vg|^(a-2) fg is declared zero when f or g
            // vanishes; with both nonzero a vanishing mix is a genuine
            // non-integrable singularity.
            if (std::abs(mix) <= 1e-12 * (std::abs(u * fv) + std::abs(v * gv)))
                throw SingularityError("dudv_measure: u*f + v*g vanishes at atom " +
                                       std::to_string(i) + " with f*g != 0");
            sing_sum += mi * std::pow(std::abs(mix), a - 2.0) * fv * gv;
        }
        if (mix != 0.0) {
            const double sp = signed_power(mix, a - 1.0);
            joint_f += mi * sp * fv;
            joint_g += mi * sp * gv;
        }
        if (u != 0.0 && fv != 0.0) single_f += mi * signed_power(u * fv, a - 1.0) * fv;
        if (v != 0.0 && gv != 0.0) single_g += mi * signed_power(v * gv, a - 1.0) * gv;
    }
    const double e_joint = std::exp(-mix_norm_pow(p, u, v));
    const double e_indep = std::exp(-std::pow(std::abs(u), a) * p.norm_f_pow() -
                                    std::pow(std::abs(v), a) * p.norm_g_pow());
    return -a * (a - 1.0) * sing_sum * e_joint + a * a * joint_f * joint_g * e_joint -
           a * a * single_f * single_g * e_indep;
}

double u_envelope_ratio(const KernelPair& p, const std::vector<std::pair<double, double>>& grid,
                     UBound bound) {
    const double a = p.alpha;
    const double m2v = m2(p);
    const double nf_half = std::pow(p.norm_f_pow(), 0.5); // ||f||^{a/2}
    const double ng_half = std::pow(p.norm_g_pow(), 0.5);
    double worst = 0.0;
    for (const auto& [u, v] : grid) {
        const double uv_half = std::pow(std::abs(u * v), 0.5 * a);
        double envelope = 2.0 * uv_half * m2v;
        if (bound == UBound::Gaussian) {
            const double gap = std::pow(std::abs(u), 0.5 * a) * nf_half -
                               std::pow(std::abs(v), 0.5 * a) * ng_half;
            envelope *= std::exp(-gap * gap);
        } else if (bound == UBound::Coercive) {
            envelope *= std::exp(-2.0 * (nf_half * ng_half - m2v) * uv_half);
        }
        const double num = std::abs(u_measure(p, u, v));
        if (envelope == 0.0) continue; // 0/0 counts as 0
        worst = std::max(worst, num / envelope);
    }
    return worst;
}

double estimate_eps1(const KernelPair& p) {
    const double denom = std::pow(p.norm_f_pow(), 0.5) * std::pow(p.norm_g_pow(), 0.5);
    return 1.0 - m2(p) / denom;
}

namespace {

// ||uf+vg||^alpha on the constraint set, parameterized by angle:
// u = sign(cos t)|cos t|^{2/a}/||f||, v = sign(sin t)|sin t|^{2/a}/||g||.
struct Eps2Objective {
    const KernelPair& p;
    double inv_nf, inv_ng, two_over_a;

    explicit Eps2Objective(const KernelPair& pair)
        : p(pair),
          inv_nf(1.0 / pair.norm_f()),
          inv_ng(1.0 / pair.norm_g()),
          two_over_a(2.0 / pair.alpha) {}

    double operator()(double t) const {
        const double c = std::cos(t);
        const double s = std::sin(t);
        const double u = signed_power_or_zero(c) * inv_nf;
        const double v = signed_power_or_zero(s) * inv_ng;
        double acc = 0.0;
        for (std::size_t i = 0; i < p.f.size(); ++i)
            acc += p.f.mass[i] *
                   std::pow(std::abs(u * p.f.value[i] + v * p.g.value[i]), p.alpha);
        return acc;
    }

  private:
    double signed_power_or_zero(double x) const {
        if (x == 0.0) return 0.0;
        const double mag = std::pow(std::abs(x), two_over_a);
        return x > 0.0 ? mag : -mag;
    }
};

template <typename F>
double golden_section_min(const F& fn, double lo, double hi, double tol) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = fn(c), fd = fn(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = fn(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = fn(d);
        }
    }
    return std::min(fn(0.5 * (a + b)), std::min(fc, fd));
}

} // namespace

double estimate_eps2(const KernelPair& p, std::size_t grid_points, double refine_tol) {
    p.validate();
    Eps2Objective obj(p);
    // (u,v) -> (-u,-v) leaves the objective unchanged, so the half circle
    // [0, pi) covers the constraint set.
    const double span = std::numbers::pi;
    const double step = span / static_cast<double>(grid_points);
    double best = obj(0.0);
    std::size_t best_idx = 0;
    for (std::size_t i = 1; i < grid_points; ++i) {
        const double val = obj(static_cast<double>(i) * step);
        if (val < best) {
            best = val;
            best_idx = i;
        }
    }
    const double center = static_cast<double>(best_idx) * step;
    const double refined = golden_section_min(obj, center - step, center + step, refine_tol);
    return std::max(0.0, std::min(best, refined));
}

KernelPair representation_transform(const KernelPair& p, const std::vector<double>& h,
                                    const std::vector<std::size_t>& relabel) {
    p.validate();
    const std::size_t n = p.f.size();
    if (h.size() != n) throw ShapeError("representation_transform: h length mismatch");
    if (relabel.size() != n) throw ShapeError("representation_transform: permutation length mismatch");
    std::vector<bool> seen(n, false);
    for (std::size_t idx : relabel) {
        if (idx >= n || seen[idx]) throw ParameterError("representation_transform: invalid permutation");
        seen[idx] = true;
    }
    for (double hv : h)
        if (hv == 0.0) throw ParameterError("representation_transform: h must be nonzero");

    KernelPair out;
    out.alpha = p.alpha;
    out.f.mass.resize(n);
    out.f.value.resize(n);
    out.g.mass.resize(n);
    out.g.value.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = relabel[i];
        const double scaled_mass = std::pow(std::abs(h[i]), p.alpha) * p.f.mass[i];
        out.f.mass[j] = scaled_mass;
        out.g.mass[j] = scaled_mass;
        out.f.value[j] = p.f.value[i] / h[i];
        out.g.value[j] = p.g.value[i] / h[i];
    }
    return out;
}

DependenceReport dependence_report(const KernelPair& p) {
    p.validate();
    DependenceReport r;
    r.alpha = p.alpha;
    KernelPair swapped{p.g, p.f, p.alpha};
    if (p.alpha > 1.0) {
        r.m1_star_fg = m1_star(p);
        r.m1_star_gf = m1_star(swapped);
        r.m1 = r.m1_star_fg + r.m1_star_gf;
    }
    r.m2 = m2(p);
    r.codifference = codifference(p);
    r.eps1 = estimate_eps1(p);
    r.eps2 = estimate_eps2(p);
    return r;
}

} // namespace swt
