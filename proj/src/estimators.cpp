#include "swt/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "swt/errors.hpp"

namespace swt {

void RegressionWeights::validate() const {
    if (w.size() < 2) throw ParameterError("regression weights need at least 2 octaves");
    double s0 = 0.0, s1 = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        s0 += w[i];
        s1 += static_cast<double>(j_min + static_cast<int>(i)) * w[i];
    }
    if (std::abs(s0) > 1e-12 || std::abs(s1 - 1.0) > 1e-12)
        throw ParameterError("regression weights fail the slope identities");
}

RegressionWeights ols_weights(int j_min, int j_max, const std::vector<double>& variance_hints) {
    if (j_max <= j_min) throw ParameterError("ols_weights: need at least 2 octaves");
    const std::size_t n = static_cast<std::size_t>(j_max - j_min + 1);
    std::vector<double> prec(n, 1.0);
    if (!variance_hints.empty()) {
        if (variance_hints.size() != n) throw ShapeError("ols_weights: variance hints length");
        for (std::size_t i = 0; i < n; ++i) {
            if (!(variance_hints[i] > 0.0))
                throw ParameterError("ols_weights: variance hints must be positive");
            prec[i] = 1.0 / variance_hints[i];
        }
    }
    double psum = 0.0, jbar = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        psum += prec[i];
        jbar += prec[i] * static_cast<double>(j_min + static_cast<int>(i));
    }
    jbar /= psum;
    double denom = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dj = static_cast<double>(j_min + static_cast<int>(i)) - jbar;
        denom += prec[i] * dj * dj;
    }
    RegressionWeights rw;
    rw.j_min = j_min;
    rw.w.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double dj = static_cast<double>(j_min + static_cast<int>(i)) - jbar;
        rw.w[i] = prec[i] * dj / denom;
    }
    rw.validate();
    return rw;
}

namespace {

void require_octave_match(const WaveletCoefGrid& grid, const RegressionWeights& w) {
    if (grid.j_min != w.j_min || grid.octaves.size() != w.w.size())
        throw ShapeError("octave range of weights does not match the grid");
    for (const auto& o : grid.octaves)
        if (o.empty()) throw DataError("estimate: empty octave");
}

void record_normality_condition(const WaveletCoefGrid& grid, EstimateResult& res) {
    if (grid.alpha > 0.0 && grid.hurst > 0.0 && grid.q > 0) {
        LfsmSpec spec{grid.alpha, grid.hurst};
        if (!spec.normality_condition(grid.q))
            res.warnings.push_back("octave-decorrelation condition Q - H > 1/(alpha(alpha-1)) "
                                   "fails; estimate valid, normality not guaranteed");
    }
}

} // namespace

EstimateResult estimate_H_log(const WaveletCoefGrid& grid, const RegressionWeights& w) {
    w.validate();
    require_octave_match(grid, w);
    EstimateResult res;
    res.method = "log";
    res.j_min = grid.j_min;
    res.w = w.w;
    double h = 0.0;
    for (std::size_t i = 0; i < grid.octaves.size(); ++i) {
        const auto& d = grid.octaves[i];
        double mean = 0.0;
        for (double v : d) {
            if (v == 0.0)
                throw DataError("estimate_H_log: zero wavelet coefficient at octave " +
                                std::to_string(grid.j_min + static_cast<int>(i)));
            mean += std::log2(std::abs(v));
        }
        mean /= static_cast<double>(d.size());
        res.y.push_back(mean);
        res.counts.push_back(d.size());
        h += w.w[i] * mean;
    }
    res.h_hat = h - 0.5;
    record_normality_condition(grid, res);
    return res;
}

EstimateResult estimate_H_power(const WaveletCoefGrid& grid, const RegressionWeights& w,
                                double beta, std::optional<double> alpha) {
    w.validate();
    require_octave_match(grid, w);
    const double a = alpha.value_or(grid.alpha);
    if (!(a > 0.0))
        throw ParameterError("estimate_H_power: alpha must be supplied (grid metadata empty)");
    if (beta == 0.0 || !(beta > -1.0 && beta < 0.5 * a))
        throw ParameterError("estimate_H_power: beta must lie in (-1, alpha/2) and be nonzero");
    EstimateResult res;
    res.method = "power";
    res.beta = beta;
    res.j_min = grid.j_min;
    res.w = w.w;
    double h = 0.0;
    for (std::size_t i = 0; i < grid.octaves.size(); ++i) {
        const auto& d = grid.octaves[i];
        double mean = 0.0;
        for (double v : d) {
            if (v == 0.0 && beta < 0.0)
                throw DataError("estimate_H_power: zero coefficient with negative beta");
            mean += std::pow(std::abs(v), beta);
        }
        mean /= static_cast<double>(d.size());
        if (!(mean > 0.0)) throw DataError("estimate_H_power: degenerate octave moment");
        const double y = std::log2(mean);
        res.y.push_back(y);
        res.counts.push_back(d.size());
        h += w.w[i] * y;
    }
    res.h_hat = h / beta - 0.5;
    record_normality_condition(grid, res);
    return res;
}

namespace {

std::vector<double> transformed_octave(const std::vector<double>& d, const SigmaMethod& m) {
    std::vector<double> out(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double v = std::abs(d[i]);
        if (m.power) {
            out[i] = std::pow(v, m.beta);
        } else {
            if (v == 0.0) throw DataError("sigma_jk_plugin: zero coefficient");
            out[i] = std::log2(v);
        }
    }
    return out;
}

} // namespace

double sigma_jk_plugin(const std::vector<WaveletCoefGrid>& replicates, int j, int k,
                       long lag_cap, const SigmaMethod& method) {
    if (k < j) throw ParameterError("sigma_jk_plugin: requires k >= j");
    if (lag_cap < 1) throw ParameterError("sigma_jk_plugin: lag cap must be >= 1");
    if (replicates.empty()) throw ParameterError("sigma_jk_plugin: no replicates");

    const long stride = 1L << (k - j); // octave-j indices per octave-k index
    std::vector<std::vector<double>> tj, tk;
    tj.reserve(replicates.size());
    tk.reserve(replicates.size());
    double mj = 0.0, mk = 0.0;
    std::size_t cj = 0, ck = 0;
    for (const auto& g : replicates) {
        tj.push_back(transformed_octave(g.octave(j), method));
        tk.push_back(transformed_octave(g.octave(k), method));
        for (double v : tj.back()) mj += v;
        for (double v : tk.back()) mk += v;
        cj += tj.back().size();
        ck += tk.back().size();
    }
    if (cj == 0 || ck == 0) throw DiagnosticsError("sigma_jk_plugin: empty octaves");
    mj /= static_cast<double>(cj);
    mk /= static_cast<double>(ck);

    // Lag covariances pooled across replicates and positions: octave-k index
    // n2 aligns with octave-j index stride * n2, relative lag |n| <= lag_cap.
    double series = 0.0;
    std::size_t usable_lags = 0;
    for (long n = -lag_cap; n <= lag_cap; ++n) {
        double acc = 0.0;
        std::size_t cnt = 0;
        for (std::size_t r = 0; r < replicates.size(); ++r) {
            const auto& vj = tj[r];
            const auto& vk = tk[r];
            for (std::size_t n2 = 0; n2 < vk.size(); ++n2) {
                const long ij = stride * static_cast<long>(n2) + n;
                if (ij < 0 || ij >= static_cast<long>(vj.size())) continue;
                acc += (vj[static_cast<std::size_t>(ij)] - mj) * (vk[n2] - mk);
                ++cnt;
            }
        }
        if (cnt == 0) continue;
        series += acc / static_cast<double>(cnt);
        ++usable_lags;
    }
    if (usable_lags < 3) throw DiagnosticsError("sigma_jk_plugin: not enough usable lags");

    double value = std::pow(2.0, 0.5 * static_cast<double>(j - k)) * series;
    if (method.power) {
        // Normalization E|d_j|^beta E|d_k|^beta with pooled moment estimates.
        const double ln2sq = std::numbers::ln2 * std::numbers::ln2;
        value /= ln2sq * mj * mk;
    }
    return value;
}

double SigmaMatrix::at(int j, int k) const {
    const int n = static_cast<int>(s.size());
    if (j < j_min || k < j_min || j >= j_min + n || k >= j_min + n)
        throw ShapeError("sigma matrix index out of range");
    return s[static_cast<std::size_t>(j - j_min)][static_cast<std::size_t>(k - j_min)];
}

SigmaMatrix sigma_matrix(const std::vector<WaveletCoefGrid>& replicates, int j_min, int j_max,
                         long lag_cap, const SigmaMethod& method) {
    if (j_max < j_min) throw ParameterError("sigma_matrix: bad octave range");
    const std::size_t n = static_cast<std::size_t>(j_max - j_min + 1);
    SigmaMatrix m;
    m.j_min = j_min;
    m.s.assign(n, std::vector<double>(n, 0.0));
    for (int j = j_min; j <= j_max; ++j)
        for (int k = j; k <= j_max; ++k) {
            const double v = sigma_jk_plugin(replicates, j, k, lag_cap, method);
            m.s[static_cast<std::size_t>(j - j_min)][static_cast<std::size_t>(k - j_min)] = v;
            m.s[static_cast<std::size_t>(k - j_min)][static_cast<std::size_t>(j - j_min)] = v;
        }
    return m;
}

double sigma2_total(const SigmaMatrix& sigma, const RegressionWeights& w) {
    w.validate();
    if (sigma.j_min != w.j_min || sigma.s.size() != w.w.size())
        throw ShapeError("sigma2_total: octave ranges differ");
    double acc = 0.0;
    for (std::size_t a = 0; a < w.w.size(); ++a)
        for (std::size_t b = 0; b < w.w.size(); ++b) {
            const double ja = static_cast<double>(w.j_min + static_cast<int>(a));
            const double jb = static_cast<double>(w.j_min + static_cast<int>(b));
            acc += w.w[a] * w.w[b] * std::pow(2.0, 0.5 * (ja + jb)) * sigma.s[a][b];
        }
    return acc;
}

long default_lag_cap(std::size_t n_k) {
    return std::max(1L, std::min(static_cast<long>(n_k) / 4, 32L));
}

} // namespace swt
