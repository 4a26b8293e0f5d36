#pragma once

#include <vector>

namespace swt {

struct AdResult {
    double a2 = 0.0;       // Anderson-Darling statistic
    double a2_star = 0.0;  // small-sample adjusted statistic
    double p_value = 0.0;
    double mean = 0.0;
    double sd = 0.0;
};

/// Anderson-Darling normality test with estimated mean and variance
/// (composite null). Requires n >= 20; a degenerate sample is a
/// diagnostics error.
AdResult ad_normality(const std::vector<double>& samples);

} // namespace swt
