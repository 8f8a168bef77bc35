#include "indelphy/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace indelphy {

Moments moments(const std::vector<double>& xs) {
    Moments m;
    m.n = xs.size();
    if (m.n == 0) return m;
    double sum = 0.0;
    for (double x : xs) sum += x;
    m.mean = sum / static_cast<double>(m.n);
    if (m.n < 2) return m;
    double m2 = 0.0, m4 = 0.0;
    for (double x : xs) {
        double d = x - m.mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    double n = static_cast<double>(m.n);
    m.var = m2 / (n - 1.0);
    m.se_mean = std::sqrt(m.var / n);
    double central2 = m2 / n;
    double central4 = m4 / n;
    double v = central4 - central2 * central2;
    m.se_var = v > 0.0 ? std::sqrt(v / n) : 0.0;
    return m;
}

double z_score(double observed, double expected, double se) {
    double d = std::fabs(observed - expected);
    if (se > 0.0) return d / se;
    return d == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("ls_slope: need two equally sized samples of size >= 2");
    double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("ls_slope: degenerate abscissas");
    return (n * sxy - sx * sy) / denom;
}

double proportion_se(double p_hat, std::size_t n) {
    if (n == 0) return 0.0;
    double v = p_hat * (1.0 - p_hat) / static_cast<double>(n);
    return v > 0.0 ? std::sqrt(v) : 0.0;
}

}  // namespace indelphy
