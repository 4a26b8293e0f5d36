#pragma once

#include <optional>
#include <string>
#include <vector>

#include "swt/lfsm.hpp"

namespace swt {

/// Slope-extraction weights over a consecutive octave range:
/// sum w_j = 0 and sum j w_j = 1.
struct RegressionWeights {
    int j_min = 1;
    std::vector<double> w;

    int j_max() const { return j_min + static_cast<int>(w.size()) - 1; }
    void validate() const; // identities to 1e-12 absolute
};

/// Least-squares slope weights, optionally generalized by per-octave
/// variance hints (precision-weighted regression). Both variants satisfy the
/// weight identities by construction.
RegressionWeights ols_weights(int j_min, int j_max,
                              const std::vector<double>& variance_hints = {});

struct EstimateResult {
    std::string method; // "log" or "power"
    std::optional<double> beta;
    double h_hat = 0.0;
    int j_min = 1;
    std::vector<double> y;            // per-octave regression ordinates
    std::vector<std::size_t> counts;  // N_j
    std::vector<double> w;
    std::optional<double> sigma2_hat;
    std::vector<std::string> warnings;
};

/// H estimate from per-octave means of log2|d|:
/// H = sum_j w_j mean(log2|d_j|) - 1/2. A zero coefficient is a data error.
EstimateResult estimate_H_log(const WaveletCoefGrid& grid, const RegressionWeights& w);

/// Power-mean variant: H* = (1/beta) sum_j w_j log2(mean |d_j|^beta) - 1/2
/// with beta in (-1, alpha/2) \ {0}. alpha is taken from the grid metadata
/// unless supplied.
EstimateResult estimate_H_power(const WaveletCoefGrid& grid, const RegressionWeights& w,
                                double beta, std::optional<double> alpha = std::nullopt);

/// Which covariance enters the octave matrix.
struct SigmaMethod {
    bool power = false; // false: log2|d| covariances; true: |d|^beta variant
    double beta = 0.0;
};

/// Truncated-series octave covariance
///   sigma_jk = 2^{(j-k)/2} sum_{|n|<=L} Cov(K(d_{j,n}), K(d_{k,0})), k >= j,
/// with lag covariances pooled across replicates and positions. The power
/// variant normalizes by (ln 2)^2 E|d_j|^beta E|d_k|^beta. Single-replicate
/// input falls back to within-path estimation (biased for short series).
double sigma_jk_plugin(const std::vector<WaveletCoefGrid>& replicates, int j, int k,
                       long lag_cap, const SigmaMethod& method = {});

struct SigmaMatrix {
    int j_min = 1;
    std::vector<std::vector<double>> s;
    double at(int j, int k) const;
};

SigmaMatrix sigma_matrix(const std::vector<WaveletCoefGrid>& replicates, int j_min, int j_max,
                         long lag_cap, const SigmaMethod& method = {});

/// sigma^2 = sum_{j,k} w_j w_k 2^{j/2} 2^{k/2} sigma_jk.
double sigma2_total(const SigmaMatrix& sigma, const RegressionWeights& w);

/// Default covariance truncation: min(N_k / 4, 32).
long default_lag_cap(std::size_t n_k);

} // namespace swt
