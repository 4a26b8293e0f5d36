#include <doctest.h>

#include <cmath>

#include "swt/depmeas.hpp"
#include "swt/errors.hpp"
#include "swt/lfsm.hpp"
#include "swt/statutil.hpp"

using namespace swt;

TEST_CASE("lfsm spec invariants") {
    LfsmSpec spec{1.5, 0.7};
    CHECK(spec.kappa() == doctest::Approx(0.7 - 1.0 / 1.5)); // 1/30
    CHECK(spec.kappa() == doctest::Approx(1.0 / 30.0));
    CHECK_THROWS_AS((LfsmSpec{1.5, 1.2}.validate()), ParameterError);
    CHECK_THROWS_AS((LfsmSpec{2.3, 0.5}.validate()), ParameterError);

    // Octave-decorrelation condition: Q - H > 1/(alpha(alpha-1)).
    CHECK(LfsmSpec{1.6, 0.7}.normality_condition(2));       // 1.3 > 1.0416..
    CHECK_FALSE(LfsmSpec{1.5, 0.7}.normality_condition(2)); // 1.3 < 4/3
}

TEST_CASE("h kernel closed form and quadrature") {
    // kappa = 0: the integrand reduces to psi, so h vanishes right of 0.
    CHECK(h_kernel_haar(0.0, 0.0) == 0.0);
    CHECK(h_kernel_haar(0.0, 3.7) == 0.0);
    CHECK(h_kernel_haar(0.0, -0.25) == doctest::Approx(-0.25)); // interior hat
    // Closed-form value at the origin.
    CHECK(h_kernel_haar(0.2, 0.0) ==
          doctest::Approx((2 * std::pow(0.5, 1.2) - 1.0) / 1.2));
    CHECK(h_kernel_haar(0.2, 0.0) == doctest::Approx(-0.107875).epsilon(1e-4));
    // Left of the support nothing contributes.
    CHECK(h_kernel_haar(0.33, -1.5) == 0.0);

    LfsmSpec lf{1.5, 0.7};
    const auto haar = build_wavelet(WaveletFamily::Haar, 1, 12);
    double worst = 0.0;
    for (double u = -2.0; u <= 100.0; u += 0.37) {
        const double closed = h_kernel_haar(lf.kappa(), u);
        if (closed == 0.0) continue;
        worst = std::max(worst, std::abs(h_kernel(lf, haar, u) - closed) / std::abs(closed));
    }
    CHECK(worst <= 1e-8);

    const auto db2 = build_wavelet(WaveletFamily::Daubechies, 2, 12);
    CHECK(h_kernel(lf, db2, -10.0) == 0.0); // left of support
}

TEST_CASE("h decay matches kappa - q") {
    LfsmSpec lf{1.5, 0.7}; // kappa = 1/30
    const auto haar = build_wavelet(WaveletFamily::Haar, 1, 12);
    const auto fit_h = h_decay_fit(lf, haar, 10.0, 1000.0);
    CHECK(fit_h.slope == doctest::Approx(lf.kappa() - 1.0).epsilon(0.1));

    const auto db2 = build_wavelet(WaveletFamily::Daubechies, 2, 12);
    const auto fit_d = h_decay_fit(lf, db2, 10.0, 1000.0);
    CHECK(std::abs(fit_d.slope - (lf.kappa() - 2.0)) <= 0.1);

    // Degenerate branch: kappa = 0 Haar h vanishes on u >= 0, so the fit
    // has no usable points there.
    LfsmSpec levy{1.5, 1.0 / 1.5};
    CHECK_THROWS_AS(h_decay_fit(levy, haar, 10.0, 1000.0), DiagnosticsError);
}

TEST_CASE("path synthesis basics") {
    LfsmSpec lf{1.6, 0.7};
    SynthesisConfig cfg;
    cfg.n = 256;
    cfg.j_max = 1;
    cfg.delta = 1.0 / 16.0;
    cfg.stream = {4, 4};
    const auto path = synth_lfsm_path(lf, cfg);
    REQUIRE(path.size() == 257);
    CHECK(path[0] == 0.0);

    // Determinism.
    const auto again = synth_lfsm_path(lf, cfg);
    for (std::size_t i = 0; i < path.size(); ++i) CHECK(path[i] == again[i]);
}

TEST_CASE("kappa = 0 path is stable Levy motion in law") {
    // X(n) is then exactly SaS with scale n^(1/alpha); check the median of
    // |X(n)| against the marginal sampler at matched scale.
    LfsmSpec lf{1.5, 1.0 / 1.5};
    SynthesisConfig cfg;
    cfg.n = 512;
    cfg.j_max = 1;
    cfg.delta = 1.0 / 16.0;
    std::vector<double> ends;
    for (int r = 0; r < 600; ++r) {
        cfg.stream = {41, static_cast<std::uint64_t>(r)};
        ends.push_back(std::abs(synth_lfsm_path(lf, cfg).back()));
    }
    auto ref = sample_sas({1.5, std::pow(512.0, 1.0 / 1.5)}, {42, 0}, 200000);
    for (auto& v : ref) v = std::abs(v);
    const double med_ref = quantile_of(ref, 0.5);
    CHECK(quantile_of(ends, 0.5) == doctest::Approx(med_ref).epsilon(0.12));
}

TEST_CASE("self-similarity of path medians") {
    LfsmSpec lf{1.5, 0.7};
    SynthesisConfig cfg;
    cfg.n = 512;
    cfg.j_max = 1;
    cfg.delta = 1.0 / 16.0;
    std::vector<double> xn, xh;
    for (int r = 0; r < 600; ++r) {
        cfg.stream = {5, static_cast<std::uint64_t>(r)};
        const auto path = synth_lfsm_path(lf, cfg);
        xn.push_back(std::abs(path[512]));
        xh.push_back(std::abs(path[256]));
    }
    const double ratio = quantile_of(xn, 0.5) / quantile_of(xh, 0.5);
    CHECK(ratio == doctest::Approx(std::pow(2.0, 0.7)).epsilon(0.10));
}

TEST_CASE("direct coefficients: exact octave scaling and stationarity") {
    LfsmSpec lf{1.6, 0.7};
    const auto db2 = build_wavelet(WaveletFamily::Daubechies, 2, 12);
    SynthesisConfig cfg;
    cfg.n = 1 << 12;
    cfg.j_min = 1;
    cfg.j_max = 4;
    cfg.delta = 1.0 / 16.0;
    cfg.stream = {7, 0};
    DirectSynthesizer synth(lf, db2, cfg);

    // The discretized octave scales obey the dyadic self-similarity law
    // essentially exactly.
    for (int j = 2; j <= 4; ++j)
        CHECK(synth.octave_log2_mean(j) - synth.octave_log2_mean(j - 1) ==
              doctest::Approx(0.7 + 0.5).epsilon(1e-3));

    const auto grid = synth.coefficients(cfg.stream);
    CHECK(grid.method == "direct");
    const auto counts = grid.counts();
    REQUIRE(counts.size() == 4);
    for (std::size_t i = 0; i < counts.size(); ++i)
        CHECK(counts[i] == static_cast<std::size_t>(cfg.n) >> (i + 1));

    // Stationarity within octave: means over the two halves of the index
    // range agree within Monte Carlo error pooled over replicates.
    const int reps = 12;
    double first = 0.0, second = 0.0;
    for (int r = 0; r < reps; ++r) {
        const auto g = synth.coefficients({7, static_cast<std::uint64_t>(100 + r)});
        const auto& d = g.octave(1);
        const std::size_t half = d.size() / 2;
        for (std::size_t i = 0; i < half; ++i) {
            first += std::log2(std::abs(d[i]));
            second += std::log2(std::abs(d[i + half]));
        }
    }
    first /= reps * (1 << 11);
    second /= reps * (1 << 11);
    CHECK(first == doctest::Approx(second).epsilon(0.05));

    // Empirical log2-mean per octave matches the analytic value.
    double y3 = 0.0;
    int n3 = 0;
    for (int r = 0; r < reps; ++r) {
        const auto g = synth.coefficients({7, static_cast<std::uint64_t>(200 + r)});
        for (double v : g.octave(3)) {
            y3 += std::log2(std::abs(v));
            ++n3;
        }
    }
    CHECK(y3 / n3 == doctest::Approx(synth.octave_log2_mean(3)).epsilon(0.03));
}

TEST_CASE("pyramidal transform annihilates polynomial trends") {
    const auto db2 = build_wavelet(WaveletFamily::Daubechies, 2, 12);
    std::vector<double> constant(1025, 3.25);
    auto flat = wavelet_coeffs_pyramidal(constant, db2, 3);
    for (const auto& oct : flat.octaves)
        for (double d : oct) CHECK(std::abs(d) < 1e-10);

    std::vector<double> ramp(1025);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 0.75 * static_cast<double>(i);
    auto lin = wavelet_coeffs_pyramidal(ramp, db2, 3);
    for (const auto& oct : lin.octaves)
        for (double d : oct) CHECK(std::abs(d) < 1e-8);

    // Haar (q = 1) does not annihilate ramps.
    const auto haar = build_wavelet(WaveletFamily::Haar, 1, 10);
    auto lin_haar = wavelet_coeffs_pyramidal(ramp, haar, 2);
    double max_d = 0.0;
    for (double d : lin_haar.octave(1)) max_d = std::max(max_d, std::abs(d));
    CHECK(max_d > 0.1);

    // Border drop: N_j = floor((N - (2q-1) 2^j) / 2^j).
    const long n = 1024;
    for (int j = 1; j <= 3; ++j)
        CHECK(lin.octave(j).size() ==
              static_cast<std::size_t>((n - (3L << j)) >> j));

    CHECK_THROWS_AS(wavelet_coeffs_pyramidal({1.0, 2.0, 3.0}, db2, 4), ConfigError);
}

TEST_CASE("direct and pyramidal coefficients agree at coarse octaves") {
    LfsmSpec lf{1.6, 0.7};
    const auto db2 = build_wavelet(WaveletFamily::Daubechies, 2, 12);
    SynthesisConfig cfg;
    cfg.n = 1 << 12;
    cfg.j_min = 1;
    cfg.j_max = 4;
    cfg.delta = 1.0 / 16.0;
    cfg.horizon = 4.0 * static_cast<double>(cfg.n);
    cfg.stream = {91, 0};
    DirectSynthesizer synth(lf, db2, cfg);

    std::vector<double> dir3, pyr3;
    for (int r = 0; r < 6; ++r) {
        auto [path, grid] = synth.coefficients_and_path({91, static_cast<std::uint64_t>(r)});
        const auto pyr = wavelet_coeffs_pyramidal(path, db2, 4);
        for (double v : grid.octave(3)) dir3.push_back(std::log2(std::abs(v)));
        for (double v : pyr.octave(3)) pyr3.push_back(std::log2(std::abs(v)));
    }
    for (double q : {0.25, 0.5, 0.75})
        CHECK(quantile_of(dir3, q) == doctest::Approx(quantile_of(pyr3, q)).epsilon(0.12));
}

TEST_CASE("kernel pairs of coefficient pairs") {
    LfsmSpec levy{1.5, 1.0 / 1.5}; // kappa = 0: Haar coefficients have compact kernels
    const auto haar = build_wavelet(WaveletFamily::Haar, 1, 10);

    // Same octave, zero lag: f = g up to quadrature placement, so eps1 = 0
    // and m2 = ||f||_alpha^alpha.
    auto p0 = scale_kernel_pair(levy, haar, 2, 2, 0, 1.0 / 32.0);
    CHECK(m2(p0) == doctest::Approx(alpha_norm_pow(p0.f, 1.5)).epsilon(1e-12));

    // Haar kappa=0 coefficients at lag 2 have disjoint kernels.
    auto p2 = scale_kernel_pair(levy, haar, 2, 2, 2, 1.0 / 32.0);
    CHECK(m2(p2) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(m1(p2) == doctest::Approx(0.0).epsilon(1e-12));

    // Refinement stability for a Daubechies cross-octave pair.
    LfsmSpec lf{1.6, 0.7};
    const auto db2 = build_wavelet(WaveletFamily::Daubechies, 2, 12);
    auto coarse = scale_kernel_pair(lf, db2, 1, 2, 0, 1.0 / 8.0);
    auto fine = scale_kernel_pair(lf, db2, 1, 2, 0, 1.0 / 16.0, 1e-7);
    CHECK(m1(fine) == doctest::Approx(m1(coarse)).epsilon(2e-3));
    CHECK(m2(fine) == doctest::Approx(m2(coarse)).epsilon(2e-3));
    CHECK_THROWS_AS(scale_kernel_pair(lf, db2, 2, 1, 0), ParameterError);
}

TEST_CASE("synthesis config validation") {
    LfsmSpec lf{1.6, 0.7};
    SynthesisConfig cfg;
    cfg.n = 64;
    cfg.j_max = 3;
    cfg.delta = 0.5; // exceeds 2^-j_max
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.delta = 0.0; // auto = 2^-(j_max+3)
    CHECK(cfg.effective_delta() == doctest::Approx(std::ldexp(1.0, -6)));
    cfg.n = 4; // too short for j_max
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    const auto db2 = build_wavelet(WaveletFamily::Daubechies, 2, 12);
    SynthesisConfig tight;
    tight.n = 64;
    tight.j_max = 2;
    tight.delta = 1.0 / 8.0;
    tight.horizon = 2.0; // far below the tail-tolerance requirement
    CHECK_THROWS_AS(DirectSynthesizer(lf, db2, tight), ConfigError);
}
