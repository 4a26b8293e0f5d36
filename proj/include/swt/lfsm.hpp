#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "swt/depmeas.hpp"
#include "swt/fft.hpp"
#include "swt/rng.hpp"
#include "swt/wavelet.hpp"

namespace swt {

/// Linear fractional stable motion: alpha-stable, H-self-similar with
/// stationary increments. kappa = H - 1/alpha is the kernel exponent.
struct LfsmSpec {
    double alpha = 1.6;
    double hurst = 0.7;

    double kappa() const { return hurst - 1.0 / alpha; }
    void validate() const;
    /// Q - H > 1/(alpha(alpha-1)), the octave-decorrelation condition behind
    /// the estimator's asymptotic normality. Evaluated, never enforced.
    bool normality_condition(int q) const;
};

/// Discretization of the driving stable measure for path / coefficient
/// synthesis.
struct SynthesisConfig {
    long n = 1024;   // time horizon: path samples X(0..n), N_j = n / 2^j
    int j_min = 1;
    int j_max = 5;
    double delta = 0.0;      // control grid step; 0 = 2^-(j_max+3)
    double horizon = 0.0;    // left truncation T; 0 = auto from tail_tol
    double tail_tol = 1e-6;  // alpha-mass dropped by truncation, relative
    double path_horizon_factor = 4.0; // path-only runs truncate at factor*n
    RngStream stream;

    void validate() const;
    double effective_delta() const;
};

/// Wavelet coefficients d_{j,k} per octave plus provenance metadata.
struct WaveletCoefGrid {
    int j_min = 1;
    std::vector<std::vector<double>> octaves; // octaves[i] = d_{j_min+i, .}

    double alpha = 0.0, hurst = 0.0;
    int q = 0;
    std::string family;
    std::string method; // "direct" or "pyramidal"
    long n = 0;
    double delta = 0.0, horizon = 0.0;
    std::uint64_t base_seed = 0, stream_id = 0;

    int j_max() const { return j_min + static_cast<int>(octaves.size()) - 1; }
    const std::vector<double>& octave(int j) const;
    std::vector<std::size_t> counts() const;
};

/// h(u) = integral (s+u)_+^kappa psi(s) ds. The wavelet is treated as
/// piecewise constant on its dyadic cells and the power kernel is integrated
/// exactly per cell, so integrable singularities cost no accuracy. Haar uses
/// the closed form.
double h_kernel(const LfsmSpec& lfsm, const WaveletSpec& w, double u);

/// Closed form of h for the Haar wavelet:
/// (2(u+1/2)_+^{k+1} - u_+^{k+1} - (u+1)_+^{k+1}) / (k+1).
double h_kernel_haar(double kappa, double u);

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    std::size_t points = 0;
};

/// Least-squares slope of log|h(u)| against log u on a log-spaced grid;
/// zeros of h are skipped. Expected slope kappa - q.
DecayFit h_decay_fit(const LfsmSpec& lfsm, const WaveletSpec& w, double u_lo, double u_hi,
                     std::size_t count = 64);

/// Path X(0..n) at integer times, X(0) = 0, via midpoint discretization of
/// the moving-average kernel and FFT convolution of the increment taps.
std::vector<double> synth_lfsm_path(const LfsmSpec& lfsm, const SynthesisConfig& cfg);

/// Caches per-octave coefficient taps so Monte Carlo replicates only pay for
/// noise generation and convolution. All octaves of one replicate share a
/// single driving noise array (one underlying measure).
class DirectSynthesizer {
  public:
    DirectSynthesizer(const LfsmSpec& lfsm, const WaveletSpec& w, const SynthesisConfig& cfg);

    WaveletCoefGrid coefficients(RngStream stream) const;
    /// Coupled path + coefficients from one noise array (cross-method checks).
    std::pair<std::vector<double>, WaveletCoefGrid> coefficients_and_path(RngStream stream) const;

    /// Exact scale coefficient of the discretized d_{j,k} (alpha-norm of the
    /// tap row), and its exact log2-mean under the stable law.
    double octave_scale(int j) const;
    double octave_log2_mean(int j) const;

    double horizon() const { return horizon_; }
    double delta() const { return delta_; }
    long n() const { return cfg_.n; }
    const LfsmSpec& lfsm() const { return lfsm_; }
    const WaveletSpec& wavelet() const { return wavelet_; }

  private:
    std::vector<double> make_noise(RngStream stream) const;
    WaveletCoefGrid grid_from_noise(const std::vector<double>& noise, RngStream stream) const;

    LfsmSpec lfsm_;
    WaveletSpec wavelet_;
    SynthesisConfig cfg_;
    double delta_ = 0.0;
    double horizon_ = 0.0;
    long m_ = 0;             // cells per unit time
    std::size_t noise_len_ = 0;
    std::size_t fft_size_ = 0;
    std::vector<std::vector<double>> taps_;        // per octave
    std::vector<RealSpectrum> tap_spectra_;        // per octave
    std::vector<double> tap_scale_pow_;            // delta * sum |taps|^alpha
};

/// One-shot direct synthesis of the coefficient grid.
WaveletCoefGrid wavelet_coeffs_direct(const LfsmSpec& lfsm, const WaveletSpec& w,
                                      const SynthesisConfig& cfg);

/// Mallat filter-bank coefficients of a sampled path (X at integer times).
/// Border-affected coefficients are dropped: octave j emits
/// N_j = floor((N - (2q-1) 2^j) / 2^j) coefficients.
WaveletCoefGrid wavelet_coeffs_pyramidal(const std::vector<double>& path, const WaveletSpec& w,
                                         int j_max);

/// Discrete kernel pair of the coefficient pair (d_{j,n}, d_{k,0}) for
/// dependence-measure evaluation; j <= k.
KernelPair scale_kernel_pair(const LfsmSpec& lfsm, const WaveletSpec& w, int j, int k, long n,
                             double quad_step = 1.0 / 16.0, double tail_tol = 1e-6);

} // namespace swt
