#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "indelphy/rng.hpp"

namespace indelphy {

using Mat4 = std::array<double, 16>;  // row-major, top-left n x n block used
using Vec4 = std::array<double, 4>;

// Result of the spectral construction on a reversible rate matrix:
// w solves Q w = -w after normalization, sum_s pi_s w_s = 0 and
// sum_s pi_s w_s^2 = 1, sign fixed so the first nonzero coordinate is positive.
struct SpectralVector {
    Vec4 w{};
    double rescale = 1.0;      // factor applied to Q to place the eigenvalue at -1
    double eigen_residual = 0.0;   // max-norm of Q w + w (after rescaling)
    double mean_residual = 0.0;    // |sum pi_s w_s|
    double norm_residual = 0.0;    // |sum pi_s w_s^2 - 1|
};

// Substitution channel on 2 or 4 states. Two kinds:
//  - Cfn: states {0,1}, substitution events at rate eta flip the state, root
//    and inserted sites are uniform.
//  - Gtr: reversible rate matrix Q with stationary pi, rescaled so the largest
//    negative eigenvalue is exactly -1; substitution events are simulated by
//    uniformization at rate eta * qmax per site, inserted sites start at pi.
class SubstitutionModel {
public:
    enum class Kind { Cfn, Gtr };

    static SubstitutionModel cfn();
    static SubstitutionModel jukes_cantor();
    static SubstitutionModel two_state_symmetric();
    // Validates reversibility and stationarity, rescales Q, derives w.
    static SubstitutionModel gtr(const Mat4& q, const Vec4& pi, int n_states = 4);

    Kind kind() const { return kind_; }
    int n_states() const { return n_; }
    const Vec4& pi() const { return pi_; }
    const Mat4& q() const { return q_; }  // normalized
    double w(int state) const { return w_[state]; }
    const SpectralVector& spectral() const { return spectral_; }
    double qmax() const { return qmax_; }

    // substitution event rate per site, given the edge's eta
    double event_rate(double eta) const {
        return kind_ == Kind::Cfn ? eta : eta * qmax_;
    }

    int sample_stationary(RngStream& rng) const;
    // one uniformized substitution event applied to state s
    int apply_event(int s, RngStream& rng) const;
    // end state after total substitution exposure eta * tau (closed form)
    int sample_transition(int s, double eta_tau, RngStream& rng) const;

    char state_to_char(int s) const;
    int char_to_state(char c) const;  // throws on unknown symbols
    std::string describe() const;

private:
    SubstitutionModel() = default;

    Kind kind_ = Kind::Cfn;
    int n_ = 2;
    Mat4 q_{};
    Vec4 pi_{};
    Vec4 w_{};
    SpectralVector spectral_{};
    double qmax_ = 1.0;
    // transition cache: P(tau)_{s,s'} = sum_m spec_[m][s][s'] * exp(eig_[m] * eta * tau)
    Vec4 eig_{};
    std::array<double, 64> spec_{};
};

// Standalone spectral construction (also used by SubstitutionModel::gtr).
SpectralVector gtr_spectral_vector(const Mat4& q, const Vec4& pi, int n_states = 4);

}  // namespace indelphy
