#include "indelphy/substitution_model.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace indelphy {

namespace {

constexpr double kStructTol = 1e-8;

void validate_gtr_input(const Mat4& q, const Vec4& pi, int n) {
    if (n != 2 && n != 4)
        throw std::invalid_argument("gtr: n_states must be 2 or 4");
    double pi_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        if (!(pi[i] > 0.0))
            throw std::invalid_argument("gtr: stationary probabilities must be positive");
        pi_sum += pi[i];
    }
    if (std::fabs(pi_sum - 1.0) > kStructTol)
        throw std::invalid_argument("gtr: stationary probabilities must sum to 1");
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) {
            double qij = q[i * 4 + j];
            if (!std::isfinite(qij))
                throw std::invalid_argument("gtr: rate matrix entries must be finite");
            if (i != j && qij < 0.0)
                throw std::invalid_argument("gtr: off-diagonal rates must be >= 0");
            row += qij;
        }
        if (std::fabs(row) > kStructTol)
            throw std::invalid_argument("gtr: rate matrix rows must sum to 0");
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double flux = pi[i] * q[i * 4 + j] - pi[j] * q[j * 4 + i];
            if (std::fabs(flux) > kStructTol)
                throw std::invalid_argument("gtr: detailed balance fails, matrix not reversible");
        }
}

struct SymmetricEigen {
    Eigen::MatrixXd vectors;
    Eigen::VectorXd values;  // ascending
};

SymmetricEigen symmetrized_decomposition(const Mat4& q, const Vec4& pi, int n) {
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a(i, j) = std::sqrt(pi[i]) * q[i * 4 + j] / std::sqrt(pi[j]);
    a = 0.5 * (a + a.transpose().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("gtr: eigendecomposition failed");
    return {solver.eigenvectors(), solver.eigenvalues()};
}

}  // namespace

SpectralVector gtr_spectral_vector(const Mat4& q, const Vec4& pi, int n) {
    validate_gtr_input(q, pi, n);
    SymmetricEigen dec = symmetrized_decomposition(q, pi, n);
    // values ascend; the top one is the structural zero, the next is the
    // largest negative eigenvalue.
    double lambda2 = dec.values(n - 2);
    if (!(lambda2 < 0.0))
        throw std::invalid_argument("gtr: rate matrix must have a negative subdominant eigenvalue");
    SpectralVector out;
    out.rescale = -1.0 / lambda2;

    Eigen::VectorXd v = dec.vectors.col(n - 2);
    Vec4 w{};
    for (int i = 0; i < n; ++i) w[i] = v(i) / std::sqrt(pi[i]);
    for (int i = 0; i < n; ++i) {
        if (std::fabs(w[i]) > 1e-9) {
            if (w[i] < 0.0)
                for (int j = 0; j < n; ++j) w[j] = -w[j];
            break;
        }
    }
    out.w = w;

    double mean = 0.0, norm = 0.0;
    for (int i = 0; i < n; ++i) {
        mean += pi[i] * w[i];
        norm += pi[i] * w[i] * w[i];
    }
    out.mean_residual = std::fabs(mean);
    out.norm_residual = std::fabs(norm - 1.0);
    double resid = 0.0;
    for (int i = 0; i < n; ++i) {
        double qw = 0.0;
        for (int j = 0; j < n; ++j) qw += out.rescale * q[i * 4 + j] * w[j];
        resid = std::fmax(resid, std::fabs(qw + w[i]));
    }
    out.eigen_residual = resid;
    return out;
}

SubstitutionModel SubstitutionModel::cfn() {
    SubstitutionModel m;
    m.kind_ = Kind::Cfn;
    m.n_ = 2;
    m.pi_ = {0.5, 0.5, 0.0, 0.0};
    m.w_ = {1.0, -1.0, 0.0, 0.0};
    m.q_ = {-1.0, 1.0, 0.0, 0.0, 1.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    m.qmax_ = 1.0;
    m.spectral_.w = m.w_;
    return m;
}

SubstitutionModel SubstitutionModel::jukes_cantor() {
    Mat4 q{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) q[i * 4 + j] = i == j ? -0.75 : 0.25;
    Vec4 pi{0.25, 0.25, 0.25, 0.25};
    return gtr(q, pi, 4);
}

SubstitutionModel SubstitutionModel::two_state_symmetric() {
    // hand-built exact spectrum instead of the numeric path, so w is exactly
    // (+1, -1) and the binary deviation arithmetic is reproduced bit for bit
    SubstitutionModel m;
    m.kind_ = Kind::Gtr;
    m.n_ = 2;
    m.pi_ = {0.5, 0.5, 0.0, 0.0};
    m.w_ = {1.0, -1.0, 0.0, 0.0};
    m.q_ = {};
    m.q_[0] = -0.5;
    m.q_[1] = 0.5;
    m.q_[4] = 0.5;
    m.q_[5] = -0.5;
    m.qmax_ = 0.5;
    m.spectral_.w = m.w_;
    m.spectral_.rescale = 1.0;
    m.eig_ = {-1.0, 0.0, 0.0, 0.0};
    m.spec_ = {};
    m.spec_[0 * 16 + 0 * 4 + 0] = 0.5;
    m.spec_[0 * 16 + 0 * 4 + 1] = -0.5;
    m.spec_[0 * 16 + 1 * 4 + 0] = -0.5;
    m.spec_[0 * 16 + 1 * 4 + 1] = 0.5;
    m.spec_[1 * 16 + 0 * 4 + 0] = 0.5;
    m.spec_[1 * 16 + 0 * 4 + 1] = 0.5;
    m.spec_[1 * 16 + 1 * 4 + 0] = 0.5;
    m.spec_[1 * 16 + 1 * 4 + 1] = 0.5;
    return m;
}

SubstitutionModel SubstitutionModel::gtr(const Mat4& q_in, const Vec4& pi, int n) {
    SpectralVector sv = gtr_spectral_vector(q_in, pi, n);
    SubstitutionModel m;
    m.kind_ = Kind::Gtr;
    m.n_ = n;
    m.pi_ = pi;
    m.w_ = sv.w;
    m.spectral_ = sv;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.q_[i * 4 + j] = sv.rescale * q_in[i * 4 + j];

    double qmax = 0.0;
    for (int i = 0; i < n; ++i) qmax = std::fmax(qmax, -m.q_[i * 4 + i]);
    m.qmax_ = qmax;

    SymmetricEigen dec = symmetrized_decomposition(m.q_, pi, n);
    for (int mm = 0; mm < n; ++mm) {
        m.eig_[mm] = dec.values(mm);
        for (int s = 0; s < n; ++s)
            for (int s2 = 0; s2 < n; ++s2)
                m.spec_[mm * 16 + s * 4 + s2] = dec.vectors(s, mm) / std::sqrt(pi[s]) *
                                                dec.vectors(s2, mm) * std::sqrt(pi[s2]);
    }
    return m;
}

int SubstitutionModel::sample_stationary(RngStream& rng) const {
    if (kind_ == Kind::Cfn) return static_cast<int>(rng.below(2));
    double u = rng.uniform();
    for (int s = 0; s < n_ - 1; ++s) {
        u -= pi_[s];
        if (u < 0.0) return s;
    }
    return n_ - 1;
}

int SubstitutionModel::apply_event(int s, RngStream& rng) const {
    if (kind_ == Kind::Cfn) return 1 - s;
    // uniformized kernel P = I + Q / qmax
    double u = rng.uniform();
    double self = 1.0 + q_[s * 4 + s] / qmax_;
    if (u < self) return s;
    u -= self;
    for (int j = 0; j < n_; ++j) {
        if (j == s) continue;
        u -= q_[s * 4 + j] / qmax_;
        if (u < 0.0) return j;
    }
    return s;
}

int SubstitutionModel::sample_transition(int s, double eta_tau, RngStream& rng) const {
    if (kind_ == Kind::Cfn) {
        double p_flip = 0.5 * (1.0 - std::exp(-2.0 * eta_tau));
        return rng.bernoulli(p_flip) ? 1 - s : s;
    }
    double row[4];
    double total = 0.0;
    for (int j = 0; j < n_; ++j) {
        double p = 0.0;
        for (int mm = 0; mm < n_; ++mm)
            p += spec_[mm * 16 + s * 4 + j] * std::exp(eig_[mm] * eta_tau);
        row[j] = p > 0.0 ? p : 0.0;
        total += row[j];
    }
    double u = rng.uniform() * total;
    for (int j = 0; j < n_ - 1; ++j) {
        u -= row[j];
        if (u < 0.0) return j;
    }
    return n_ - 1;
}

char SubstitutionModel::state_to_char(int s) const {
    static const char acgt[] = {'A', 'C', 'G', 'T'};
    if (s < 0 || s >= n_) throw std::invalid_argument("state_to_char: state out of range");
    if (n_ == 2) return s == 0 ? '0' : '1';
    return acgt[s];
}

int SubstitutionModel::char_to_state(char c) const {
    if (n_ == 2) {
        if (c == '0') return 0;
        if (c == '1') return 1;
    } else {
        switch (c) {
            case 'A': case 'a': return 0;
            case 'C': case 'c': return 1;
            case 'G': case 'g': return 2;
            case 'T': case 't': return 3;
        }
    }
    std::ostringstream os;
    os << "unknown state symbol '" << c << "' for " << (n_ == 2 ? "binary" : "nucleotide")
       << " alphabet";
    throw std::invalid_argument(os.str());
}

std::string SubstitutionModel::describe() const {
    if (kind_ == Kind::Cfn) return "cfn";
    std::ostringstream os;
    os << "gtr" << n_ << "(rescale=" << spectral_.rescale << ")";
    return os.str();
}

}  // namespace indelphy
