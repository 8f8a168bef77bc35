#pragma once

#include <cstddef>
#include <vector>

namespace indelphy {

struct Moments {
    std::size_t n = 0;
    double mean = 0.0;
    double var = 0.0;       // unbiased sample variance
    double se_mean = 0.0;   // standard error of the mean
    double se_var = 0.0;    // delta-method standard error of the sample variance
};

Moments moments(const std::vector<double>& xs);

// |observed - expected| expressed in standard errors; se == 0 maps exact
// agreement to 0 and any discrepancy to infinity.
double z_score(double observed, double expected, double se);

// Least-squares slope of y over x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y);

// Standard error of an empirical proportion.
double proportion_se(double p_hat, std::size_t n);

}  // namespace indelphy
