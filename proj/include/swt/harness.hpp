#pragma once

#include <json.hpp>

#include "swt/adtest.hpp"
#include "swt/estimators.hpp"
#include "swt/functional.hpp"
#include "swt/ma_kernel.hpp"

namespace swt {

struct Verdict {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string note;
};

/// One row of long-form per-replicate output.
struct LongRow {
    std::string config_id;
    long replicate = 0;
    long n = 0;
    std::string statistic;
    double value = 0.0;
};

/// Outcome of one verification run: named verdicts, free-form metrics, and
/// the exit-code contract (0 pass, 1 any verdict failed, 2 hypothesis-unmet
/// configurations present).
struct McReport {
    std::string name;
    std::vector<Verdict> verdicts;
    nlohmann::json metrics;
    std::vector<LongRow> long_form; // per-replicate data for CSV export
    double runtime_seconds = 0.0;
    bool hypothesis_unmet = false;

    bool all_pass() const;
    int exit_code() const;
    nlohmann::json to_json() const;
};

/// Simulates xi_1..xi_n of the discretized moving average by FFT convolution
/// of i.i.d. stable noise with the kernel taps; tap spectra are cached so
/// replicates only pay for noise and one inverse transform.
class MaSimulator {
  public:
    MaSimulator(const MovingAverageSpec& spec, long series_len);

    std::vector<double> run(RngStream stream) const;
    /// Exact scale coefficient of the discretized marginal xi_0.
    double marginal_scale() const { return scale_; }
    long series_len() const { return n_; }
    const MovingAverageSpec& spec() const { return spec_; }

  private:
    MovingAverageSpec spec_;
    long n_ = 0, m_ = 0, t_units_ = 0;
    std::size_t fft_size_ = 0;
    std::size_t noise_len_ = 0;
    std::vector<double> taps_;
    RealSpectrum tap_spectrum_;
    double scale_ = 0.0;
};

struct MeanEstimate {
    double mean = 0.0;
    double se = 0.0;
    std::size_t n = 0;
    bool analytic = false;
};

/// E K(xi_0) for the discretized moving average. Uses the closed form under
/// the stable marginal when one exists, otherwise Monte Carlo through the
/// exact marginal scale (a data error results if K is non-finite on a draw).
MeanEstimate centered_mean_K(const MovingAverageSpec& spec, const FunctionalSpec& k,
                             std::size_t n_mc, RngStream stream);

struct CltRunConfig {
    MovingAverageSpec ma;
    FunctionalSpec k = FunctionalSpec::log2abs();
    std::vector<long> n_values;
    int replicates = 200;
    RngStream stream;
    long lag_cap = 64;
    double ad_p_threshold = 0.01;
    double variance_stab_tol = 0.15;
    std::size_t mean_mc = 2'000'000; // fallback centering sample size

    void validate() const;
};

/// Distribution of the normalized partial sums across replicates per N:
/// Anderson-Darling normality at the largest N and stabilization of
/// Var(S_N)/N across the two largest N.
McReport run_clt_mc(const CltRunConfig& cfg);

struct SeriesEstimate {
    double var0 = 0.0;                // Var K(xi_0)
    std::vector<double> lag_cov;      // Cov(K(xi_0), K(xi_l)), l = 1..lag_cap
    std::vector<double> partial_sums; // var0 + 2 sum_{l<=L}
    double value = 0.0;               // full truncated series
    bool tail_decreasing = false;
};

/// Truncated long-run variance series with Monte Carlo lag covariances.
SeriesEstimate sigma2_series(const CltRunConfig& cfg);

/// Tail-cut covariance scaling: |Cov(K_b(xi), K_b(eta))| against b on a
/// log-log scale with common random numbers; fitted slope (minus 2 SE) must
/// not exceed 2 beta - alpha plus the tolerance. Noise-floor points are
/// excluded from the fit. Requires the pair to satisfy the non-degeneracy
/// assumptions (positive eps1, eps2).
McReport verify_cov_bound_b(const KernelPair& pair, double beta,
                            const std::vector<double>& b_values, std::size_t mc_size,
                            RngStream stream, double slope_tol = 0.3);

/// Lagged covariance of functionals of the moving average against the
/// dependence-measure budget m1 + m2 (or ||K||_1 ||L||_1 m2 for integrable
/// functionals): the running max of the ratio must stabilize across lags.
struct LagBoundConfig {
    MovingAverageSpec ma;
    FunctionalSpec k = FunctionalSpec::log2abs();
    FunctionalSpec l = FunctionalSpec::log2abs();
    std::vector<long> lags;
    int replicates = 200;
    long window = 256; // series positions pooled per replicate
    RngStream stream;
    bool l1_mode = false; // denominator ||K||_1 ||L||_1 m2
    double growth_slack = 0.25;
};
McReport verify_cov_bound_lag(const LagBoundConfig& cfg);

/// Randomized check of the signed-power and modulus inequalities that
/// underpin the derivative and envelope bounds; zero violations required.
McReport verify_pointwise_inequalities(std::size_t draws_per_alpha, const std::vector<double>& alphas,
                        RngStream stream);

/// Singular double integral I0(r) = int int |ru - v|^(a-2) F(u) F(v) du dv
/// for the two-branch weight F; used by the bounded-constant check.
double singular_weight_integral(double alpha, double beta, double b, double r, double tol = 1e-6);

/// Quadrature check of the I0 bound: scaling identity in b, positivity, and
/// a bounded ratio to b^(2 beta - alpha) (1 + r^(alpha - 2)) across the grid.
McReport verify_singular_integral_bound(double alpha, double beta, const std::vector<double>& b_values,
                        const std::vector<double>& r_values, double tol = 1e-6);

struct EstimatorMcConfig {
    LfsmSpec lfsm;
    WaveletFamily family = WaveletFamily::Daubechies;
    int q = 2;
    int j_min = 1, j_max = 5;
    std::vector<long> n_values;
    long reference_n = 0; // bias/normality/plug-in verdicts here; 0 = largest
    int replicates = 200;
    RngStream stream;
    std::string method = "log"; // or "power"
    double beta = 0.4;
    double delta = 0.0;
    double tail_tol = 1e-6;
    double bias_tol = 0.03;
    double ad_p_threshold = 0.01;
    double var_slope_tol = 0.2;
    double plugin_factor = 2.0;

    void validate() const;
};

/// Monte Carlo of the wavelet H estimator over exact-in-law coefficient
/// grids: bias, normality of the replicate estimates, 1/N variance decay,
/// and agreement of the plug-in variance with N Var(H_hat).
McReport run_estimator_mc(const EstimatorMcConfig& cfg);

struct MultiscaleConfig {
    LfsmSpec lfsm;
    WaveletFamily family = WaveletFamily::Daubechies;
    int q = 2;
    int j_min = 1, j_max = 2;
    long n = 1L << 14;
    int replicates = 300;
    RngStream stream;
    double delta = 0.0;
    double tail_tol = 1e-6;
    long lag_cap = 16;
    double se_factor = 3.0;

    void validate() const;
};

/// Joint normality of per-octave normalized sums of log2|d|: marginal
/// normality per octave, empirical cross-covariance against the truncated
/// octave-covariance series, and shift invariance of that covariance along
/// the octave diagonal.
McReport run_multiscale_clt(const MultiscaleConfig& cfg);

/// Null calibration of the normality test: p-values uniform under the
/// normal null (KS distance over many seeds) and power against Cauchy.
McReport verify_ad_calibration(int seeds, std::size_t n_per_seed, RngStream stream,
                               double ks_tol = 0.05);

} // namespace swt
