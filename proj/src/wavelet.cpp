#include "swt/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "swt/errors.hpp"

namespace swt {

double WaveletSpec::cell_width() const { return std::ldexp(1.0, -resolution); }

std::string WaveletSpec::family_name() const {
    return family == WaveletFamily::Haar ? "haar" : "daubechies" + std::to_string(q);
}

namespace {

using cplx = std::complex<double>;

// Roots of a complex polynomial (coefficients low to high) by Durand-Kerner
// with deterministic starting points.
std::vector<cplx> poly_roots(std::vector<cplx> coef) {
    while (!coef.empty() && std::abs(coef.back()) == 0.0) coef.pop_back();
    const std::size_t deg = coef.size() - 1;
    std::vector<cplx> roots(deg);
    const cplx seed(0.4, 0.9);
    cplx p = 1.0;
    for (auto& r : roots) {
        p *= seed;
        r = p;
    }
    auto eval = [&](cplx z) {
        cplx v = coef.back();
        for (std::size_t k = coef.size() - 1; k-- > 0;) v = v * z + coef[k];
        return v;
    };
    for (int iter = 0; iter < 200; ++iter) {
        double worst = 0.0;
        for (std::size_t i = 0; i < deg; ++i) {
            cplx denom = coef.back();
            for (std::size_t j = 0; j < deg; ++j)
                if (j != i) denom *= roots[i] - roots[j];
            const cplx delta = eval(roots[i]) / denom;
            roots[i] -= delta;
            worst = std::max(worst, std::abs(delta));
        }
        if (worst < 1e-15) break;
    }
    return roots;
}

std::vector<cplx> poly_mul(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    std::vector<cplx> out(a.size() + b.size() - 1, cplx(0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

// phi at the interior integers 1..L-2 from the eigen-relation
// phi(i) = sqrt(2) sum_k h_k phi(2i - k), normalized to sum 1.
std::vector<double> scaling_at_integers(const std::vector<double>& h) {
    const int L = static_cast<int>(h.size());
    const int n = L - 2;
    // Solve (A - I) v = 0 with the normalization row sum(v) = 1 appended in
    // place of the last equation; plain Gaussian elimination with pivoting.
    std::vector<std::vector<double>> mat(n, std::vector<double>(n + 1, 0.0));
    const double r2 = std::numbers::sqrt2;
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            const int k = 2 * i - j;
            double a = (k >= 0 && k < L) ? r2 * h[static_cast<std::size_t>(k)] : 0.0;
            if (i == j) a -= 1.0;
            mat[i - 1][j - 1] = a;
        }
        mat[i - 1][n] = 0.0;
    }
    for (int j = 0; j < n; ++j) mat[n - 1][j] = 1.0;
    mat[n - 1][n] = 1.0;

    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int row = col + 1; row < n; ++row)
            if (std::abs(mat[row][col]) > std::abs(mat[pivot][col])) pivot = row;
        std::swap(mat[col], mat[pivot]);
        if (std::abs(mat[col][col]) < 1e-14)
            throw ConfigError("scaling-function eigenproblem is singular");
        for (int row = 0; row < n; ++row) {
            if (row == col) continue;
            const double factor = mat[row][col] / mat[col][col];
            for (int k = col; k <= n; ++k) mat[row][k] -= factor * mat[col][k];
        }
    }
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = mat[i][n] / mat[i][i];
    return v;
}

} // namespace

std::vector<double> daubechies_filter(int q) {
    if (q < 1 || q > 10)
        throw ParameterError("daubechies_filter: vanishing moments must lie in 1..10");
    const double r2 = std::numbers::sqrt2;
    if (q == 1) return {1.0 / r2, 1.0 / r2};

    // Binomial half-band polynomial P(y) = sum_{k<q} C(q-1+k, k) y^k.
    std::vector<cplx> pcoef(static_cast<std::size_t>(q));
    double binom = 1.0;
    for (int k = 0; k < q; ++k) {
        pcoef[static_cast<std::size_t>(k)] = binom;
        binom = binom * static_cast<double>(q + k) / static_cast<double>(k + 1);
    }
    const auto yroots = poly_roots(pcoef);

    // Spectral factor: per root y, keep the z-root of z^2 - (2-4y) z + 1
    // inside the unit disk.
    std::vector<cplx> b{1.0};
    for (const cplx& y : yroots) {
        const cplx m = 2.0 - 4.0 * y;
        const cplx s = std::sqrt(m * m - 4.0);
        cplx z1 = 0.5 * (m + s);
        cplx z2 = 0.5 * (m - s);
        const cplx zin = std::abs(z1) < std::abs(z2) ? z1 : z2;
        b = poly_mul(b, {-zin, 1.0});
    }
    // H(z) = sqrt(2) ((1+z)/2)^q B(z)/B(1).
    std::vector<cplx> hpoly = b;
    for (int k = 0; k < q; ++k) hpoly = poly_mul(hpoly, {0.5, 0.5});
    cplx b1 = 0.0;
    for (const auto& c : b) b1 += c;
    std::vector<double> h(hpoly.size());
    for (std::size_t i = 0; i < hpoly.size(); ++i) {
        const cplx v = hpoly[i] * r2 / b1;
        if (std::abs(v.imag()) > 1e-9)
            throw ConfigError("daubechies_filter: factorization produced complex taps");
        h[i] = v.real();
    }
    // Match the customary minimum-delay ordering (largest taps first).
    double head = 0.0, tail = 0.0;
    for (std::size_t i = 0; i < h.size() / 2; ++i) {
        head += std::abs(h[i]);
        tail += std::abs(h[h.size() - 1 - i]);
    }
    if (tail > head) std::reverse(h.begin(), h.end());

    // Sanity: unit energy and two-scale sum.
    double sum = 0.0, energy = 0.0;
    for (double v : h) {
        sum += v;
        energy += v * v;
    }
    if (std::abs(sum - r2) > 1e-10 || std::abs(energy - 1.0) > 1e-10)
        throw ConfigError("daubechies_filter: factorization failed the filter identities");
    return h;
}

WaveletSpec build_wavelet(WaveletFamily family, int q, int resolution) {
    if (q < 1) throw ParameterError("build_wavelet: q must be >= 1");
    if (family == WaveletFamily::Haar && q != 1)
        throw ParameterError("build_wavelet: the Haar wavelet has exactly one vanishing moment");
    if (resolution < 6 || resolution > 22)
        throw ParameterError("build_wavelet: resolution must lie in 6..22");

    WaveletSpec w;
    w.family = family;
    w.q = family == WaveletFamily::Haar ? 1 : q;
    w.resolution = resolution;
    w.lowpass = daubechies_filter(w.q);
    const std::size_t L = w.lowpass.size();
    w.highpass.resize(L);
    for (std::size_t k = 0; k < L; ++k)
        w.highpass[k] = (k % 2 == 0 ? 1.0 : -1.0) * w.lowpass[L - 1 - k];

    const int r = resolution;
    const std::size_t n_cells = (L - 1) << r;

    if (w.q == 1) {
        // Piecewise-constant psi: +1 on [0, 1/2), -1 on [1/2, 1).
        w.psi.assign(n_cells, 1.0);
        for (std::size_t i = n_cells / 2; i < n_cells; ++i) w.psi[i] = -1.0;
    } else {
        // Exact dyadic samples of phi by repeated application of the
        // two-scale relation, then psi at cell midpoints of level r from
        // phi at level r.
        const double r2 = std::numbers::sqrt2;
        std::vector<double> phi((L - 1) + 1, 0.0);
        const auto interior = scaling_at_integers(w.lowpass);
        for (std::size_t i = 0; i < interior.size(); ++i) phi[i + 1] = interior[i];

        for (int s = 1; s <= r; ++s) {
            const std::size_t len = ((L - 1) << s) + 1;
            std::vector<double> next(len, 0.0);
            const long half = 1L << (s - 1);
            for (std::size_t i = 0; i < len; ++i) {
                if (i % 2 == 0) {
                    next[i] = phi[i / 2];
                    continue;
                }
                double acc = 0.0;
                for (std::size_t k = 0; k < L; ++k) {
                    const long idx = static_cast<long>(i) - static_cast<long>(k) * half;
                    if (idx >= 0 && idx < static_cast<long>(phi.size()))
                        acc += w.lowpass[k] * phi[static_cast<std::size_t>(idx)];
                }
                next[i] = r2 * acc;
            }
            phi.swap(next);
        }

        w.psi.assign(n_cells, 0.0);
        const long scale = 1L << r;
        for (std::size_t i = 0; i < n_cells; ++i) {
            double acc = 0.0;
            for (std::size_t k = 0; k < L; ++k) {
                const long idx = 2 * static_cast<long>(i) + 1 - static_cast<long>(k) * scale;
                if (idx >= 0 && idx < static_cast<long>(phi.size()))
                    acc += w.highpass[k] * phi[static_cast<std::size_t>(idx)];
            }
            w.psi[i] = r2 * acc;
        }
    }

    // Quadrature moments at cell midpoints; the invariant check.
    const double delta = w.cell_width();
    w.moments.assign(static_cast<std::size_t>(w.q) + 1, 0.0);
    w.abs_moments.assign(static_cast<std::size_t>(w.q) + 1, 0.0);
    for (std::size_t i = 0; i < n_cells; ++i) {
        const double t = (static_cast<double>(i) + 0.5) * delta;
        double tm = 1.0;
        for (int m = 0; m <= w.q; ++m) {
            w.moments[static_cast<std::size_t>(m)] += w.psi[i] * tm * delta;
            w.abs_moments[static_cast<std::size_t>(m)] += std::abs(w.psi[i]) * tm * delta;
            tm *= t;
        }
    }
    for (int m = 0; m < w.q; ++m) {
        const auto mi = static_cast<std::size_t>(m);
        if (std::abs(w.moments[mi]) > 1e-6 * w.abs_moments[mi])
            throw ConfigError("build_wavelet: moment " + std::to_string(m) +
                              " fails the vanishing tolerance");
    }
    if (std::abs(w.moments[static_cast<std::size_t>(w.q)]) <
        1e-9 * w.abs_moments[static_cast<std::size_t>(w.q)])
        throw ConfigError("build_wavelet: moment q unexpectedly vanishes");
    return w;
}

} // namespace swt
