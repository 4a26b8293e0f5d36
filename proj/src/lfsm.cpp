#include "swt/lfsm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "swt/errors.hpp"
#include "swt/stable.hpp"
#include "swt/statutil.hpp"

namespace swt {

namespace {

constexpr double euler_gamma = 0.577215664901532861;

double pos_pow(double x, double p) { return x > 0.0 ? std::pow(x, p) : 0.0; }

} // namespace

void LfsmSpec::validate() const {
    if (!(alpha > 1.0 && alpha < 2.0))
        throw ParameterError("lfsm alpha must lie in (1, 2), got " + std::to_string(alpha));
    if (!(hurst > 0.0 && hurst < 1.0))
        throw ParameterError("lfsm H must lie in (0, 1), got " + std::to_string(hurst));
}

bool LfsmSpec::normality_condition(int q) const {
    return static_cast<double>(q) - hurst > 1.0 / (alpha * (alpha - 1.0));
}

void SynthesisConfig::validate() const {
    if (n < 2) throw ConfigError("synthesis config: n must be >= 2");
    if (j_min < 1 || j_max < j_min) throw ConfigError("synthesis config: bad octave range");
    if ((n >> j_max) < 1) throw ConfigError("synthesis config: n too small for j_max");
    const double d = effective_delta();
    if (!(d > 0.0)) throw ConfigError("synthesis config: delta must be positive");
    if (d > std::ldexp(1.0, -j_max) + 1e-15)
        throw ConfigError("synthesis config: delta must not exceed 2^-j_max");
    if (!(tail_tol > 0.0 && tail_tol < 0.5))
        throw ConfigError("synthesis config: tail tolerance must lie in (0, 0.5)");
}

double SynthesisConfig::effective_delta() const {
    return delta > 0.0 ? delta : std::ldexp(1.0, -(j_max + 3));
}

const std::vector<double>& WaveletCoefGrid::octave(int j) const {
    if (j < j_min || j > j_max()) throw ShapeError("octave out of range");
    return octaves[static_cast<std::size_t>(j - j_min)];
}

std::vector<std::size_t> WaveletCoefGrid::counts() const {
    std::vector<std::size_t> c;
    c.reserve(octaves.size());
    for (const auto& o : octaves) c.push_back(o.size());
    return c;
}

double h_kernel_haar(double kappa, double u) {
    const double k1 = kappa + 1.0;
    return (2.0 * pos_pow(u + 0.5, k1) - pos_pow(u, k1) - pos_pow(u + 1.0, k1)) / k1;
}

double h_kernel(const LfsmSpec& lfsm, const WaveletSpec& w, double u) {
    lfsm.validate();
    const double kappa = lfsm.kappa();
    if (w.family == WaveletFamily::Haar) return h_kernel_haar(kappa, u);
    if (u <= -w.support_right()) return 0.0;
    const double k1 = kappa + 1.0;
    const double delta = w.cell_width();
    double acc = 0.0;
    double edge_prev = pos_pow(u, k1); // (0 * delta + u)_+^{k+1}
    for (std::size_t i = 0; i < w.psi.size(); ++i) {
        const double edge_next = pos_pow((static_cast<double>(i) + 1.0) * delta + u, k1);
        acc += w.psi[i] * (edge_next - edge_prev);
        edge_prev = edge_next;
    }
    return acc / k1;
}

namespace {

// Truncation point Y such that the alpha-mass of h beyond Y is below
// tol * (mass up to Y), using the numeric envelope |h(y)| <= C y^(kappa - q).
double h_tail_horizon(const LfsmSpec& lfsm, const WaveletSpec& w, double tol) {
    const double kappa = lfsm.kappa();
    const double q = static_cast<double>(w.q);
    const double decay_pow = (q - kappa) * lfsm.alpha - 1.0; // tail integral exponent
    if (!(decay_pow > 0.0)) throw ConfigError("coefficient kernel tail is not integrable");

    // Envelope constant from samples on [8, 64].
    double c_env = 0.0;
    for (int i = 0; i <= 32; ++i) {
        const double y = 8.0 * std::pow(8.0, static_cast<double>(i) / 32.0);
        c_env = std::max(c_env, std::abs(h_kernel(lfsm, w, y)) * std::pow(y, q - kappa));
    }
    // Mass of |h|^alpha over [-(2q-1), 64] by midpoint sampling.
    double mass = 0.0;
    const double lo = -w.support_right(), hi = 64.0, step = 1.0 / 64.0;
    const long cells = std::lround((hi - lo) / step);
    for (long i = 0; i < cells; ++i) {
        const double y = lo + (static_cast<double>(i) + 0.5) * step;
        mass += std::pow(std::abs(h_kernel(lfsm, w, y)), lfsm.alpha) * step;
    }
    if (!(mass > 0.0)) throw ConfigError("coefficient kernel has zero mass");
    // tail(Y) = C^alpha Y^-decay_pow / decay_pow <= tol * mass.
    const double ca = std::pow(c_env, lfsm.alpha);
    double y_cut = std::pow(ca / (decay_pow * tol * mass), 1.0 / decay_pow);
    return std::max(8.0, y_cut);
}

} // namespace

DecayFit h_decay_fit(const LfsmSpec& lfsm, const WaveletSpec& w, double u_lo, double u_hi,
                     std::size_t count) {
    lfsm.validate();
    if (!(u_lo > 0.0 && u_hi > u_lo)) throw ParameterError("h_decay_fit: bad u range");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(count - 1);
        const double u = u_lo * std::pow(u_hi / u_lo, t);
        const double hv = std::abs(h_kernel(lfsm, w, u));
        if (hv < 1e-300) continue; // exact zeros (degenerate branches) are skipped
        lx.push_back(std::log(u));
        ly.push_back(std::log(hv));
    }
    if (lx.size() < 8)
        throw DiagnosticsError("h_decay_fit: fewer than 8 usable points (h vanishes)");
    const auto fit = fit_slope(lx, ly);
    return DecayFit{fit.slope, fit.intercept, fit.se_slope, lx.size()};
}

std::vector<double> synth_lfsm_path(const LfsmSpec& lfsm, const SynthesisConfig& cfg) {
    lfsm.validate();
    cfg.validate();
    const double kappa = lfsm.kappa();
    const double delta = cfg.effective_delta();
    const long m = std::lround(1.0 / delta);
    if (std::abs(m * delta - 1.0) > 1e-12)
        throw ConfigError("synthesis delta must divide unit time");
    const double horizon =
        cfg.horizon > 0.0 ? cfg.horizon
                          : cfg.path_horizon_factor * static_cast<double>(cfg.n);
    const long t_units = static_cast<long>(std::ceil(horizon));

    const std::size_t noise_len = static_cast<std::size_t>((t_units + cfg.n) * m);
    Xoshiro256pp rng(cfg.stream);
    const double noise_scale = std::pow(delta, 1.0 / lfsm.alpha);
    std::vector<double> noise(noise_len);
    for (double& z : noise) z = noise_scale * sample_sas_standard(lfsm.alpha, rng);

    // Increment taps q(y) = y_+^k - (y-1)_+^k at midpoints.
    std::vector<double> taps(noise_len);
    for (std::size_t i = 0; i < noise_len; ++i) {
        const double y = (static_cast<double>(i) + 0.5) * delta;
        taps[i] = pos_pow(y, kappa) - pos_pow(y - 1.0, kappa);
    }

    const auto conv = fft_convolve(taps, noise);
    std::vector<double> path(static_cast<std::size_t>(cfg.n) + 1, 0.0);
    for (long k = 1; k <= cfg.n; ++k) {
        const std::size_t idx = static_cast<std::size_t>((k + t_units) * m - 1);
        path[static_cast<std::size_t>(k)] =
            path[static_cast<std::size_t>(k - 1)] + conv[idx];
    }
    return path;
}

namespace {

// Cell-mean copy of psi at a coarser resolution: preserves cell integrals,
// which is all the tap quadrature consumes.
WaveletSpec coarsen_for_quadrature(const WaveletSpec& w, int target_r) {
    if (target_r >= w.resolution) return w;
    WaveletSpec c = w;
    c.resolution = target_r;
    const std::size_t merge = static_cast<std::size_t>(1) << (w.resolution - target_r);
    const std::size_t n = w.psi.size() / merge;
    c.psi.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < merge; ++k) s += w.psi[i * merge + k];
        c.psi[i] = s / static_cast<double>(merge);
    }
    return c;
}

} // namespace

DirectSynthesizer::DirectSynthesizer(const LfsmSpec& lfsm, const WaveletSpec& w,
                                     const SynthesisConfig& cfg)
    : lfsm_(lfsm), wavelet_(w), cfg_(cfg) {
    lfsm.validate();
    cfg.validate();
    delta_ = cfg.effective_delta();
    m_ = std::lround(1.0 / delta_);
    if (std::abs(static_cast<double>(m_) * delta_ - 1.0) > 1e-12)
        throw ConfigError("synthesis delta must divide unit time");

    // Kernel taps are cut at y_cut in h-argument units, so every coefficient
    // carries the same relative truncated mass; the noise array must then
    // reach back far enough that the earliest coefficient of the coarsest
    // octave still sees its full tap row.
    const double y_cut = h_tail_horizon(lfsm, w, cfg.tail_tol);
    const long y_units = static_cast<long>(std::ceil(y_cut));
    const double auto_h = std::ldexp(static_cast<double>(y_units), cfg.j_max);
    horizon_ = cfg.horizon > 0.0 ? cfg.horizon : auto_h;
    if (horizon_ < auto_h)
        throw ConfigError("synthesis horizon leaves truncated mass above the tail tolerance");
    const long t_units = static_cast<long>(std::ceil(horizon_));
    const double support = w.support_right();
    const long margin = static_cast<long>(std::ceil(support)) << cfg.j_max;

    noise_len_ = static_cast<std::size_t>((t_units + cfg.n + margin) * m_);
    const double kappa = lfsm.kappa();
    const WaveletSpec quad = coarsen_for_quadrature(w, 9);

    std::size_t max_tap_len = 0;
    const int octaves = cfg.j_max - cfg.j_min + 1;
    taps_.resize(static_cast<std::size_t>(octaves));
    tap_scale_pow_.resize(static_cast<std::size_t>(octaves));

    for (int j = cfg.j_min; j <= cfg.j_max; ++j) {
        const std::size_t oj = static_cast<std::size_t>(j - cfg.j_min);
        const long mj = m_ << j; // tap cells per unit of h-argument
        const double eta = 1.0 / static_cast<double>(mj);
        const long p_lo = -static_cast<long>(std::ceil(support)) * mj + 1;
        const long p_hi = y_units * mj;
        const double amp = std::pow(2.0, j * (kappa + 0.5));
        auto& row = taps_[oj];
        row.resize(static_cast<std::size_t>(p_hi - p_lo + 1));
        double mass = 0.0;
        for (long p = p_lo; p <= p_hi; ++p) {
            const double y = (static_cast<double>(p) - 0.5) * eta;
            const double v = amp * h_kernel(lfsm, quad, y);
            row[static_cast<std::size_t>(p - p_lo)] = v;
            mass += std::pow(std::abs(v), lfsm.alpha);
        }
        tap_scale_pow_[oj] = mass * delta_;
        max_tap_len = std::max(max_tap_len, row.size());
    }

    fft_size_ = next_pow2(noise_len_ + max_tap_len);
    tap_spectra_.resize(taps_.size());
    for (std::size_t i = 0; i < taps_.size(); ++i)
        tap_spectra_[i] = real_fft(taps_[i], fft_size_);
}

std::vector<double> DirectSynthesizer::make_noise(RngStream stream) const {
    Xoshiro256pp rng(stream);
    const double noise_scale = std::pow(delta_, 1.0 / lfsm_.alpha);
    std::vector<double> noise(noise_len_);
    for (double& z : noise) z = noise_scale * sample_sas_standard(lfsm_.alpha, rng);
    return noise;
}

WaveletCoefGrid DirectSynthesizer::grid_from_noise(const std::vector<double>& noise,
                                                   RngStream stream) const {
    const auto noise_spec = real_fft(noise, fft_size_);
    const long t_units = static_cast<long>(std::ceil(horizon_));
    const double support = wavelet_.support_right();

    WaveletCoefGrid grid;
    grid.j_min = cfg_.j_min;
    grid.alpha = lfsm_.alpha;
    grid.hurst = lfsm_.hurst;
    grid.q = wavelet_.q;
    grid.family = wavelet_.family_name();
    grid.method = "direct";
    grid.n = cfg_.n;
    grid.delta = delta_;
    grid.horizon = horizon_;
    grid.base_seed = stream.base_seed;
    grid.stream_id = stream.stream_id;

    for (int j = cfg_.j_min; j <= cfg_.j_max; ++j) {
        const std::size_t oj = static_cast<std::size_t>(j - cfg_.j_min);
        const long mj = m_ << j;
        const long p_lo = -static_cast<long>(std::ceil(support)) * mj + 1;
        const auto conv = real_ifft(spectrum_product(tap_spectra_[oj], noise_spec));
        const long n_j = cfg_.n >> j;
        std::vector<double> d(static_cast<std::size_t>(n_j));
        for (long k = 1; k <= n_j; ++k) {
            // d_{j,k} = sum_p taps[p] noise[(k 2^j + T) m - p]
            const long idx = (k << j) * m_ + t_units * m_ - p_lo;
            d[static_cast<std::size_t>(k - 1)] = conv[static_cast<std::size_t>(idx)];
        }
        grid.octaves.push_back(std::move(d));
    }
    return grid;
}

WaveletCoefGrid DirectSynthesizer::coefficients(RngStream stream) const {
    return grid_from_noise(make_noise(stream), stream);
}

std::pair<std::vector<double>, WaveletCoefGrid>
DirectSynthesizer::coefficients_and_path(RngStream stream) const {
    const auto noise = make_noise(stream);
    auto grid = grid_from_noise(noise, stream);

    // Path from the same noise: increments convolved with the kernel steps.
    const double kappa = lfsm_.kappa();
    const long t_units = static_cast<long>(std::ceil(horizon_));
    const std::size_t inc_len = static_cast<std::size_t>((t_units + cfg_.n) * m_);
    std::vector<double> taps(inc_len);
    for (std::size_t i = 0; i < inc_len; ++i) {
        const double y = (static_cast<double>(i) + 0.5) * delta_;
        taps[i] = pos_pow(y, kappa) - pos_pow(y - 1.0, kappa);
    }
    const auto conv = fft_convolve(taps, noise);
    std::vector<double> path(static_cast<std::size_t>(cfg_.n) + 1, 0.0);
    for (long k = 1; k <= cfg_.n; ++k) {
        const std::size_t idx = static_cast<std::size_t>((k + t_units) * m_ - 1);
        path[static_cast<std::size_t>(k)] = path[static_cast<std::size_t>(k - 1)] + conv[idx];
    }
    return {std::move(path), std::move(grid)};
}

double DirectSynthesizer::octave_scale(int j) const {
    if (j < cfg_.j_min || j > cfg_.j_max) throw ShapeError("octave out of range");
    return std::pow(tap_scale_pow_[static_cast<std::size_t>(j - cfg_.j_min)], 1.0 / lfsm_.alpha);
}

double DirectSynthesizer::octave_log2_mean(int j) const {
    // E log2 |S| for S SaS(alpha, sigma): (ln sigma + gamma (1/alpha - 1)) / ln 2.
    const double sigma = octave_scale(j);
    return (std::log(sigma) + euler_gamma * (1.0 / lfsm_.alpha - 1.0)) / std::numbers::ln2;
}

WaveletCoefGrid wavelet_coeffs_direct(const LfsmSpec& lfsm, const WaveletSpec& w,
                                      const SynthesisConfig& cfg) {
    return DirectSynthesizer(lfsm, w, cfg).coefficients(cfg.stream);
}

WaveletCoefGrid wavelet_coeffs_pyramidal(const std::vector<double>& path, const WaveletSpec& w,
                                         int j_max) {
    const long n = static_cast<long>(path.size()) - 1;
    if (n < 2) throw ConfigError("pyramidal transform: path too short");
    const long support = 2 * w.q - 1;
    if (n < (support << j_max))
        throw ConfigError("pyramidal transform: path shorter than 2^j_max * support");

    WaveletCoefGrid grid;
    grid.j_min = 1;
    grid.q = w.q;
    grid.family = w.family_name();
    grid.method = "pyramidal";
    grid.n = n;

    const std::size_t L = w.lowpass.size();
    std::vector<double> approx(path.begin() + 1, path.end()); // X(1..n)
    for (int j = 1; j <= j_max; ++j) {
        const std::size_t len = approx.size();
        if (len < L) throw ConfigError("pyramidal transform: octave ran out of samples");
        const std::size_t out_len = (len - L) / 2 + 1;
        std::vector<double> next(out_len), detail(out_len);
        for (std::size_t k = 0; k < out_len; ++k) {
            double a = 0.0, d = 0.0;
            for (std::size_t i = 0; i < L; ++i) {
                const double x = approx[2 * k + i];
                a += w.lowpass[i] * x;
                d += w.highpass[i] * x;
            }
            next[k] = a;
            detail[k] = d;
        }
        const long n_j = (n - (support << j)) >> j;
        if (n_j < 1) throw ConfigError("pyramidal transform: no interior coefficients left");
        detail.resize(std::min(detail.size(), static_cast<std::size_t>(n_j)));
        grid.octaves.push_back(std::move(detail));
        approx.swap(next);
    }
    return grid;
}

KernelPair scale_kernel_pair(const LfsmSpec& lfsm, const WaveletSpec& w, int j, int k, long n,
                             double quad_step, double tail_tol) {
    lfsm.validate();
    if (j > k) throw ParameterError("scale_kernel_pair: requires j <= k");
    if (j < 0) throw ParameterError("scale_kernel_pair: octaves must be >= 0");
    const double kappa = lfsm.kappa();
    const double support = w.support_right();
    const double y_cut = h_tail_horizon(lfsm, w, tail_tol);

    const double cj = std::ldexp(1.0, -j), ck = std::ldexp(1.0, -k);
    const double amp_j = std::pow(2.0, j * (kappa + 0.5));
    const double amp_k = std::pow(2.0, k * (kappa + 0.5));
    // f(u) = amp_j h(n - u/2^j) nonzero for u in (2^j (n - y_cut), 2^j (n + support));
    // g(u) = amp_k h(-u/2^k) nonzero for u in (-2^k y_cut, 2^k support).
    const double u_lo = std::min((static_cast<double>(n) - y_cut) / cj, -y_cut / ck);
    const double u_hi = std::max((static_cast<double>(n) + support) / cj, support / ck);

    const long cells = std::max(2L, static_cast<long>(std::ceil((u_hi - u_lo) / quad_step)));
    const double hstep = (u_hi - u_lo) / static_cast<double>(cells);
    KernelPair p;
    p.alpha = lfsm.alpha;
    for (long i = 0; i < cells; ++i) {
        const double u = u_lo + (static_cast<double>(i) + 0.5) * hstep;
        const double fv = amp_j * h_kernel(lfsm, w, static_cast<double>(n) - cj * u);
        const double gv = amp_k * h_kernel(lfsm, w, -ck * u);
        if (fv == 0.0 && gv == 0.0) continue;
        p.f.mass.push_back(hstep);
        p.f.value.push_back(fv);
        p.g.mass.push_back(hstep);
        p.g.value.push_back(gv);
    }
    if (p.f.size() == 0) throw ConfigError("scale_kernel_pair: empty discretization");
    return p;
}

} // namespace swt
