#include <doctest.h>

#include <cmath>
#include <numbers>

#include "swt/adtest.hpp"
#include "swt/errors.hpp"
#include "swt/rng.hpp"

using namespace swt;

namespace {

std::vector<double> normal_draws(std::size_t n, RngStream stream) {
    Xoshiro256pp rng(stream);
    std::vector<double> xs(n);
    for (auto& x : xs)
        x = std::sqrt(-2.0 * std::log(rng.uniform01())) *
            std::cos(2.0 * std::numbers::pi * rng.uniform01());
    return xs;
}

} // namespace

TEST_CASE("normal samples are accepted") {
    int accepted = 0;
    for (int s = 0; s < 50; ++s) {
        const auto r = ad_normality(normal_draws(10'000, {100, static_cast<std::uint64_t>(s)}));
        if (r.p_value > 0.01) ++accepted;
    }
    CHECK(accepted >= 49); // >= 98% of seeds
}

TEST_CASE("heavy tails are rejected decisively") {
    Xoshiro256pp rng({7, 7});
    std::vector<double> cauchy(10'000);
    for (auto& x : cauchy) x = std::tan(0.5 * std::numbers::pi * rng.uniform_sym());
    CHECK(ad_normality(cauchy).p_value < 1e-3);

    std::vector<double> uniform(5'000);
    for (auto& x : uniform) x = rng.uniform01();
    CHECK(ad_normality(uniform).p_value < 1e-3);
}

TEST_CASE("ad statistic is affine invariant") {
    auto xs = normal_draws(500, {3, 1});
    const auto base = ad_normality(xs);
    for (auto& x : xs) x = 4.2 * x - 17.0;
    const auto moved = ad_normality(xs);
    CHECK(base.a2 == doctest::Approx(moved.a2).epsilon(1e-10));
    CHECK(base.p_value == doctest::Approx(moved.p_value).epsilon(1e-10));
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(ad_normality(std::vector<double>(10, 1.0)), DiagnosticsError);
    CHECK_THROWS_AS(ad_normality(std::vector<double>(100, 3.14)), DiagnosticsError);
}
