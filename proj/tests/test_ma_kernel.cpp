#include <doctest.h>

#include <cmath>

#include "swt/depmeas.hpp"
#include "swt/errors.hpp"
#include "swt/ma_kernel.hpp"

using namespace swt;

TEST_CASE("indicator kernel pairs") {
    MovingAverageSpec spec;
    spec.a = MaKernel::indicator();
    spec.alpha = 1.5;

    // Zero lag: f = g, m2 equals the kernel alpha-mass (= 1 exactly on this
    // aligned grid).
    auto p0 = ma_kernel_pair(spec, 0);
    CHECK(m2(p0) == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < p0.f.size(); ++i) CHECK(p0.f.value[i] == p0.g.value[i]);

    // Lag 2: disjoint supports.
    auto p2 = ma_kernel_pair(spec, 2);
    CHECK(m2(p2) == 0.0);
    CHECK(m1(p2) == 0.0);
}

TEST_CASE("power-law kernel pairs stabilize under grid refinement") {
    MovingAverageSpec spec;
    spec.a = MaKernel::power_law(2.5);
    spec.alpha = 1.5;
    spec.delta = 1.0 / 64.0;

    auto coarse = ma_kernel_pair(spec, 8);
    const double m1_c = m1(coarse), m2_c = m2(coarse);

    MovingAverageSpec fine = spec;
    fine.delta = 1.0 / 128.0;
    fine.tail_tol = spec.tail_tol / 10.0; // also push the horizon out
    auto refined = ma_kernel_pair(fine, 8);
    CHECK(m1(refined) == doctest::Approx(m1_c).epsilon(2e-3));
    CHECK(m2(refined) == doctest::Approx(m2_c).epsilon(2e-3));
}

TEST_CASE("causality validation") {
    MovingAverageSpec spec;
    spec.a = MaKernel::indicator(-0.5, 1.0);
    spec.alpha = 1.5;
    spec.causal_shift = 0.0;
    CHECK_THROWS_AS(spec.validate(), ParameterError); // support left of the shift
    spec.causal_shift = -0.5;
    CHECK_NOTHROW(spec.validate()); // shifted causality is fine
    spec.causal_shift = 0.5;
    CHECK_THROWS_AS(spec.validate(), ParameterError); // shift must be <= 0
}

TEST_CASE("auto horizon honors the tail tolerance") {
    MovingAverageSpec spec;
    spec.a = MaKernel::power_law(2.5);
    spec.alpha = 1.5;
    spec.tail_tol = 1e-6;
    // Tail fraction beyond T for x^(-p alpha) is T^(1 - p alpha).
    const double t = spec.effective_horizon();
    CHECK(std::pow(t, 1.0 - 2.5 * 1.5) <= 1e-6 * 1.0001);

    MovingAverageSpec ind;
    ind.a = MaKernel::indicator();
    ind.alpha = 1.2;
    CHECK(ind.effective_horizon() == doctest::Approx(1.0));

    // Custom kernels derive a horizon numerically; the dropped mass beyond
    // it must be small relative to the total 1/alpha.
    MovingAverageSpec cust;
    cust.a = MaKernel::custom([](double x) { return std::exp(-x); }, 0.0);
    cust.alpha = 1.5;
    cust.tail_tol = 1e-4;
    const double tc = cust.effective_horizon();
    CHECK(std::exp(-1.5 * tc) <= 1e-3);
}

TEST_CASE("summability verdicts") {
    MovingAverageSpec ind;
    ind.a = MaKernel::indicator();
    ind.alpha = 1.5;
    const auto r_ind = check_summability(ind, 16);
    CHECK(r_ind.clt_hypothesis());
    CHECK(!r_ind.heuristic);
    CHECK(*r_ind.analytic_sqrt);
    CHECK(*r_ind.analytic_m1);

    MovingAverageSpec good;
    good.a = MaKernel::power_law(2.5);
    good.alpha = 1.5;
    const auto r_good = check_summability(good, 64);
    CHECK(*r_good.analytic_m1);   // p (alpha - 1) = 1.25 > 1
    CHECK(*r_good.analytic_sqrt); // p alpha / 2 = 1.875 > 1
    CHECK(r_good.clt_hypothesis());
    // Numeric block decay should land near p * alpha = 3.75.
    CHECK(r_good.block_decay_exponent == doctest::Approx(3.75).epsilon(0.05));

    MovingAverageSpec bad;
    bad.a = MaKernel::power_law(1.5);
    bad.alpha = 1.5;
    const auto r_bad = check_summability(bad, 64);
    CHECK_FALSE(*r_bad.analytic_m1); // p (alpha - 1) = 0.75 <= 1
    CHECK_FALSE(r_bad.clt_hypothesis());

    // Custom kernels only get the heuristic verdict.
    MovingAverageSpec cust;
    cust.a = MaKernel::custom(
        [](double x) { return x >= 1.0 ? std::pow(x, -2.5) : 0.0; }, 1.0, 200.0);
    cust.alpha = 1.5;
    const auto r_cust = check_summability(cust, 64);
    CHECK(r_cust.heuristic);
    CHECK(r_cust.m1_blocks_converge);

    CHECK_THROWS_AS(check_summability(good, 4), ParameterError);
}
