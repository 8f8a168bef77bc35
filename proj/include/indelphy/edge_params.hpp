#pragma once

#include <cmath>
#include <stdexcept>

namespace indelphy {

// Per-edge evolution parameters: elapsed time t, substitution rate eta,
// per-site deletion rate delta, per-site insertion rate lambda.
struct EdgeParams {
    double t = 0.0;
    double eta = 0.0;
    double delta = 0.0;
    double lambda = 0.0;

    void validate() const {
        auto ok = [](double x) { return std::isfinite(x) && x >= 0.0; };
        if (!ok(t) || !ok(eta) || !ok(delta) || !ok(lambda))
            throw std::invalid_argument("EdgeParams: t, eta, delta, lambda must be finite and >= 0");
    }
};

// Relative threshold below which delta and lambda are treated as equal and the
// critical-case closed forms are used.
inline bool near_critical(double delta, double lambda) {
    double scale = std::fmax(std::fmax(delta, lambda), 1.0);
    return std::fabs(delta - lambda) < 1e-9 * scale;
}

}  // namespace indelphy
