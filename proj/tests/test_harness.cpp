#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "swt/errors.hpp"
#include "swt/harness.hpp"
#include "swt/statutil.hpp"

using namespace swt;

TEST_CASE("stable moment formulas") {
    // E|Cauchy|^(1/2) = sqrt(2); E ln|Cauchy| = 0.
    CHECK(sas_abs_moment(1.0, 0.5) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(sas_log_moment(1.0) == 0.0);
    // alpha = 2 is N(0, 2): E ln|X| = (ln 2 - gamma - ln 2) / ... = -gamma/2.
    CHECK(sas_log_moment(2.0) == doctest::Approx(-0.5772156649 / 2.0).epsilon(1e-9));
    // Monte Carlo agreement for an interior case.
    auto xs = sample_sas({1.5, 1.0}, {123, 5}, 500'000);
    double s = 0.0;
    for (double x : xs) s += std::pow(std::abs(x), 0.4);
    CHECK(s / xs.size() == doctest::Approx(sas_abs_moment(1.5, 0.4)).epsilon(0.01));
    CHECK_THROWS_AS(sas_abs_moment(1.5, 1.6), ParameterError);
}

TEST_CASE("functional registry") {
    const auto lg = FunctionalSpec::log2abs();
    CHECK(lg(4.0) == doctest::Approx(2.0));
    CHECK(lg(-0.5) == doctest::Approx(-1.0));
    CHECK(!std::isfinite(lg(0.0)));

    const auto pw = FunctionalSpec::abs_pow(0.5);
    CHECK(pw(-9.0) == doctest::Approx(3.0));
    CHECK_THROWS_AS(FunctionalSpec::abs_pow(0.9).validate(1.5), ParameterError);
    CHECK_NOTHROW(FunctionalSpec::abs_pow(0.9).validate(1.9));

    const auto cl = FunctionalSpec::bounded_clip(2.0);
    CHECK(cl(5.0) == 2.0);
    CHECK(cl(-5.0) == -2.0);
    CHECK(cl(0.5) == 0.5);
    CHECK(*cl.analytic_mean(1.5, 3.0) == 0.0);

    const auto ind = FunctionalSpec::indicator(0.0, std::numeric_limits<double>::infinity());
    CHECK(*ind.analytic_mean(1.3, 2.0) == 0.5);
    CHECK(!FunctionalSpec::indicator(1.0, 2.0).analytic_mean(1.3, 2.0).has_value());
}

TEST_CASE("moving average simulator matches its marginal law") {
    MovingAverageSpec spec;
    spec.a = MaKernel::power_law(2.5);
    spec.alpha = 1.5;
    MaSimulator sim(spec, 64);
    // Discretized marginal scale is close to the continuum alpha-norm
    // (int_1^inf x^(-3.75))^(1/1.5) = (1/2.75)^(2/3).
    CHECK(sim.marginal_scale() == doctest::Approx(std::pow(1.0 / 2.75, 1.0 / 1.5)).epsilon(0.01));

    // Empirical characteristic function of xi_0 against the exact scale.
    std::vector<double> xs;
    for (int r = 0; r < 400; ++r) {
        const auto xi = sim.run({17, static_cast<std::uint64_t>(r)});
        xs.insert(xs.end(), xi.begin(), xi.end());
    }
    const double sig = sim.marginal_scale();
    for (double theta : {0.5, 1.0, 2.0}) {
        double re = 0.0;
        for (double x : xs) re += std::cos(theta * x);
        re /= static_cast<double>(xs.size());
        const double expect = std::exp(-std::pow(sig * theta, 1.5));
        CHECK(re == doctest::Approx(expect).epsilon(0.02));
    }

    // Determinism and stream separation.
    const auto a = sim.run({17, 0});
    const auto b = sim.run({17, 0});
    const auto c = sim.run({17, 1});
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("centered_mean_K uses closed forms and Monte Carlo consistently") {
    MovingAverageSpec spec;
    spec.a = MaKernel::indicator();
    spec.alpha = 1.5;
    const auto lg = centered_mean_K(spec, FunctionalSpec::log2abs(), 1000, {1, 1});
    CHECK(lg.analytic);
    CHECK(lg.mean == doctest::Approx(sas_log_moment(1.5) / std::numbers::ln2).epsilon(1e-10));

    const auto ind = centered_mean_K(
        spec, FunctionalSpec::indicator(0.0, std::numeric_limits<double>::infinity()), 1000,
        {1, 2});
    CHECK(ind.analytic);
    CHECK(ind.mean == 0.5);

    // Finite-interval indicator falls back to Monte Carlo with a standard
    // error; compare with the sign-symmetry complement.
    const auto mc = centered_mean_K(spec, FunctionalSpec::indicator(-1.0, 1.0), 400'000, {1, 3});
    CHECK(!mc.analytic);
    CHECK(mc.se > 0.0);
    const auto mc2 =
        centered_mean_K(spec, FunctionalSpec::indicator(1.0, 1e18), 400'000, {1, 4});
    CHECK(mc.mean + 2.0 * mc2.mean == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("iid configuration passes the classical CLT") {
    CltRunConfig cfg;
    cfg.ma.a = MaKernel::indicator();
    cfg.ma.alpha = 1.5;
    cfg.k = FunctionalSpec::bounded_clip(2.0);
    cfg.n_values = {512, 2048};
    cfg.replicates = 200;
    cfg.stream = {31, 0};
    const auto rep = run_clt_mc(cfg);
    CHECK(!rep.hypothesis_unmet);
    CHECK(rep.all_pass());
    CHECK(rep.exit_code() == 0);

    // In the iid case the long-run variance collapses to Var K(xi_0).
    const auto series = sigma2_series(cfg);
    CHECK(series.value == doctest::Approx(series.var0).epsilon(0.05));
    double max_lag = 0.0;
    for (double c : series.lag_cov) max_lag = std::max(max_lag, std::abs(c));
    CHECK(max_lag < 0.05 * series.var0);
}

TEST_CASE("clt run flags unmet hypotheses") {
    CltRunConfig cfg;
    cfg.ma.a = MaKernel::power_law(1.6); // p(alpha-1) = 0.8 <= 1
    cfg.ma.alpha = 1.5;
    cfg.k = FunctionalSpec::bounded_clip(1.0);
    cfg.n_values = {256, 512};
    cfg.replicates = 60;
    cfg.stream = {33, 0};
    const auto rep = run_clt_mc(cfg);
    CHECK(rep.hypothesis_unmet);
    CHECK(rep.exit_code() != 0);
}

TEST_CASE("clt config validation") {
    CltRunConfig cfg;
    cfg.ma.a = MaKernel::indicator();
    cfg.ma.alpha = 1.5;
    cfg.n_values = {512, 512};
    CHECK_THROWS_AS(cfg.validate(), ConfigError); // not strictly increasing
    cfg.n_values = {512};
    cfg.replicates = 10;
    CHECK_THROWS_AS(cfg.validate(), ConfigError); // too few replicates
}

TEST_CASE("tail-cut covariance harness structure") {
    // Independent pair: everything sits below the noise floor and the
    // verdict reports that instead of a slope.
    std::vector<double> mass{1.0, 1.0};
    KernelPair indep{{mass, {1.0, 0.0}}, {mass, {0.0, 1.0}}, 1.5};
    const auto rep = verify_cov_bound_b(indep, 0.5, {1.0, 2.0}, 200'000, {71, 0});
    CHECK(rep.all_pass());
    bool any_usable = false;
    for (const auto& pt : rep.metrics["points"])
        if (pt["usable"].get<bool>()) any_usable = true;
    CHECK(!any_usable);

    // Degenerate pair violates the hypotheses.
    KernelPair degen{{mass, {1.0, 1.0}}, {mass, {1.0, -1.0}}, 1.5};
    CHECK_THROWS_AS(verify_cov_bound_b(degen, 0.5, {1.0}, 50'000, {71, 1}), HypothesisError);

    KernelPair dep{{mass, {1.0, 0.4}}, {mass, {0.4, 1.0}}, 1.5};
    CHECK_THROWS_AS(verify_cov_bound_b(dep, 0.9, {1.0}, 50'000, {71, 2}), ParameterError);
    CHECK_THROWS_AS(verify_cov_bound_b(dep, 0.5, {0.5}, 50'000, {71, 3}), ParameterError);
}

TEST_CASE("lagged covariance ratios against the dependence budget") {
    // Indicator kernel: lags >= 2 have a zero budget and are skipped.
    LagBoundConfig cfg;
    cfg.ma.a = MaKernel::indicator();
    cfg.ma.alpha = 1.5;
    cfg.k = FunctionalSpec::bounded_clip(2.0);
    cfg.l = FunctionalSpec::bounded_clip(2.0);
    cfg.lags = {2, 3, 4};
    cfg.replicates = 60;
    cfg.window = 128;
    cfg.stream = {81, 0};
    const auto rep = verify_cov_bound_lag(cfg);
    CHECK(rep.all_pass());
    for (const auto& pt : rep.metrics["points"])
        CHECK(pt.contains("skipped"));

    // Power-law kernel with integrable functionals: the L1-mode budget
    // ||K||_1 ||L||_1 m2 stays bounded relative to the covariances.
    LagBoundConfig l1;
    l1.ma.a = MaKernel::power_law(2.5);
    l1.ma.alpha = 1.5;
    l1.k = FunctionalSpec::indicator(1.0, 3.0);
    l1.l = FunctionalSpec::indicator(1.0, 3.0);
    l1.lags = {2, 4, 8};
    l1.replicates = 150;
    l1.window = 512;
    l1.l1_mode = true;
    l1.stream = {82, 0};
    const auto rep2 = verify_cov_bound_lag(l1);
    CHECK(rep2.all_pass());

    LagBoundConfig badl1 = l1;
    badl1.k = FunctionalSpec::bounded_clip(1.0); // not integrable
    CHECK_THROWS_AS(verify_cov_bound_lag(badl1), ParameterError);
}

TEST_CASE("signed-power inequality sweep") {
    const auto rep = verify_pointwise_inequalities(100'000, {1.1, 1.5, 1.9}, {91, 0});
    CHECK(rep.all_pass());
    CHECK(rep.verdicts.front().value == 0.0);
    // Spot values: alpha = 1.5 difference bound at x1 = 1, x2 = -1.
    const double lhs = std::abs(signed_power(1.0, 0.5) - signed_power(-1.0, 0.5));
    CHECK(lhs == doctest::Approx(2.0));
    CHECK(lhs <= 2.0 * std::pow(2.0, 0.5));
    // Modulus inequality at alpha = 1, x = y = 1: | |2| - 1 - 1 | = 0 <= 2.
    CHECK(std::abs(std::abs(2.0) - 1.0 - 1.0) <= 2.0);
}

TEST_CASE("singular integral bound") {
    // Refinement consistency of the quadrature itself.
    const double coarse = singular_weight_integral(1.5, 0.5, 1.0, 1.0, 1e-5);
    const double fine = singular_weight_integral(1.5, 0.5, 1.0, 1.0, 1e-7);
    CHECK(coarse == doctest::Approx(fine).epsilon(5e-4));

    // Scaling identity in b is exact analytically.
    const double base = singular_weight_integral(1.5, 0.5, 1.0, 2.3, 1e-6);
    const double scaled = singular_weight_integral(1.5, 0.5, 3.0, 2.3, 1e-6);
    CHECK(scaled == doctest::Approx(std::pow(3.0, -0.5) * base).epsilon(1e-4));

    const auto rep = verify_singular_integral_bound(1.5, 0.5, {1.0, 2.0}, {0.5, 2.0}, 1e-6);
    CHECK(rep.all_pass());

    CHECK_THROWS_AS(singular_weight_integral(1.5, 0.9, 1.0, 1.0), ParameterError);
    CHECK_THROWS_AS(singular_weight_integral(1.5, 0.5, 0.5, 1.0), ParameterError);
}

TEST_CASE("estimator Monte Carlo at reduced scale") {
    EstimatorMcConfig cfg;
    cfg.lfsm = {1.6, 0.7};
    cfg.n_values = {1 << 10, 1 << 11, 1 << 12};
    cfg.replicates = 50;
    cfg.delta = 1.0 / 32.0;
    cfg.stream = {101, 0};
    cfg.bias_tol = 0.05;
    const auto rep = run_estimator_mc(cfg);
    CHECK(rep.all_pass());
    CHECK(rep.metrics["normality_condition"].get<bool>());

    // The power-mean estimator route also runs end to end.
    EstimatorMcConfig pw = cfg;
    pw.method = "power";
    pw.beta = 0.4;
    pw.n_values = {1 << 10, 1 << 11};
    pw.replicates = 40;
    pw.bias_tol = 0.08;
    const auto rep2 = run_estimator_mc(pw);
    CHECK(std::abs(rep2.verdicts.front().value) <= 0.08); // bias verdict
}

TEST_CASE("multiscale normalized sums at reduced scale") {
    MultiscaleConfig cfg;
    cfg.lfsm = {1.6, 0.7};
    cfg.j_min = 1;
    cfg.j_max = 2;
    cfg.n = 1 << 11;
    cfg.replicates = 120;
    cfg.delta = 1.0 / 16.0;
    cfg.stream = {111, 0};
    const auto rep = run_multiscale_clt(cfg);
    CHECK(rep.all_pass());
}

TEST_CASE("report exit codes") {
    McReport rep;
    rep.verdicts.push_back({"a", true, 0, 0, ""});
    CHECK(rep.exit_code() == 0);
    rep.hypothesis_unmet = true;
    CHECK(rep.exit_code() == 2);
    rep.verdicts.push_back({"b", false, 1, 0, ""});
    CHECK(rep.exit_code() == 1);
    const auto j = rep.to_json();
    CHECK(j["verdicts"].size() == 2);
    CHECK(j["all_pass"] == false);
}

TEST_CASE("custom functionals require the unchecked acknowledgement") {
    auto good = FunctionalSpec::custom([](double x) { return std::cos(x); }, 0.0, true);
    CHECK_NOTHROW(good.validate(1.5));
    CHECK(good(0.0) == 1.0);
    auto bad = FunctionalSpec::custom([](double x) { return std::cos(x); }, 0.0, false);
    CHECK_THROWS_AS(bad.validate(1.5), ParameterError);
    auto fat = FunctionalSpec::custom([](double x) { return x; }, 1.0, true);
    CHECK_THROWS_AS(fat.validate(1.5), ParameterError); // growth >= alpha/2
}

TEST_CASE("reports reproduce bit-identically from config and seed") {
    CltRunConfig cfg;
    cfg.ma.a = MaKernel::indicator();
    cfg.ma.alpha = 1.5;
    cfg.k = FunctionalSpec::bounded_clip(2.0);
    cfg.n_values = {256, 512};
    cfg.replicates = 50;
    cfg.stream = {12345, 6};
    const auto a = run_clt_mc(cfg);
    const auto b = run_clt_mc(cfg);
    CHECK(a.metrics == b.metrics);
    REQUIRE(a.long_form.size() == b.long_form.size());
    for (std::size_t i = 0; i < a.long_form.size(); ++i)
        CHECK(a.long_form[i].value == b.long_form[i].value);
    CHECK(a.long_form.size() == 2 * 50);
}

TEST_CASE("log-functional covariance ratios stabilize across lags") {
    LagBoundConfig cfg;
    cfg.ma.a = MaKernel::power_law(2.5);
    cfg.ma.alpha = 1.5;
    cfg.k = FunctionalSpec::log2abs();
    cfg.l = FunctionalSpec::log2abs();
    cfg.lags = {1, 2, 3, 4, 6, 8};
    cfg.replicates = 600;
    cfg.window = 1024;
    cfg.stream = {83, 0};
    const auto rep = verify_cov_bound_lag(cfg);
    CHECK(rep.all_pass());
    CHECK(!rep.hypothesis_unmet);
    std::size_t usable = 0;
    for (const auto& pt : rep.metrics["points"])
        if (pt.contains("ratio")) ++usable;
    CHECK(usable >= 3);
    CHECK(rep.metrics["eps1_at_max_lag"].get<double>() > 0.0);
    CHECK(rep.metrics["eps2_at_max_lag"].get<double>() > 0.0);
}
