#include "indelphy/analytics.hpp"

#include <cmath>
#include <stdexcept>

namespace indelphy {

ChannelStats channel_stats(const EdgeParams& p) {
    p.validate();
    ChannelStats cs;
    cs.d = std::exp(-p.delta * p.t);
    cs.flip = flip_probability(p.eta, p.t);
    if (near_critical(p.delta, p.lambda)) {
        cs.m = 1.0;
        cs.gamma = p.lambda * p.t;
    } else {
        cs.m = std::exp(-(p.delta - p.lambda) * p.t);
        cs.gamma = p.lambda * (1.0 - cs.m) / (p.delta - p.lambda);
    }
    return cs;
}

double length_mgf(double s, const EdgeParams& p) {
    p.validate();
    if (near_critical(p.delta, p.lambda)) {
        double lt = p.lambda * p.t;
        double den = lt * (1.0 - s) + 1.0;
        if (std::fabs(den) < 1e-300)
            throw std::domain_error("length_mgf: s = " + std::to_string(s) +
                                    " is a pole of the critical-case form");
        return (lt * (1.0 - s) + s) / den;
    }
    double e = std::exp((p.delta - p.lambda) * p.t);
    double num = p.delta * (s - 1.0) - e * (p.lambda * s - p.delta);
    double den = p.lambda * (s - 1.0) - e * (p.lambda * s - p.delta);
    if (std::fabs(den) < 1e-300)
        throw std::domain_error("length_mgf: s = " + std::to_string(s) +
                                " is a pole of the generating function");
    return num / den;
}

double expected_length(const EdgeParams& p, double k_r) {
    return k_r * channel_stats(p).m;
}

double length_variance(const EdgeParams& p, double k_r) {
    p.validate();
    if (near_critical(p.delta, p.lambda)) return k_r * 2.0 * p.lambda * p.t;
    double m = std::exp(-(p.delta - p.lambda) * p.t);
    return k_r * (p.delta + p.lambda) / (p.delta - p.lambda) * (m - m * m);
}

double new_sites_expectation(const EdgeParams& p) {
    ChannelStats cs = channel_stats(p);
    return cs.m - cs.d;
}

double survival_probability(const EdgeParams& p) {
    p.validate();
    return std::exp(-p.delta * p.t);
}

double flip_probability(double eta, double t) {
    return 0.5 * (1.0 - std::exp(-2.0 * eta * t));
}

double deviation_decay(const EdgeParams& p, ModelKind kind) {
    p.validate();
    double sub = kind == ModelKind::Cfn ? 2.0 * p.eta : p.eta;
    return std::exp(-(sub + p.delta) * p.t);
}

double fork_expected_distance(const EdgeParams& eu, const EdgeParams& ea, const EdgeParams& eb,
                              double k_r, ModelKind kind) {
    eu.validate();
    double scale = kind == ModelKind::Cfn ? 0.25 : 1.0;
    return deviation_decay(ea, kind) * deviation_decay(eb, kind) *
           std::exp(-(eu.delta - eu.lambda) * eu.t) * k_r * scale;
}

double beta_rate(double eta, double delta, double lambda, ModelKind kind) {
    double sub = kind == ModelKind::Cfn ? 4.0 * eta : 2.0 * eta;
    return sub + delta + lambda;
}

double clock_kappa(double k_r, double delta, double lambda, double total_time, ModelKind kind) {
    double scale = kind == ModelKind::Cfn ? 0.25 : 1.0;
    return k_r * std::exp(-(delta - lambda) * total_time) * scale;
}

double clock_expected_distance(double eta, double delta, double lambda, double t, double kappa,
                               ModelKind kind) {
    return std::exp(-beta_rate(eta, delta, lambda, kind) * t) * kappa;
}

double clock_path_metric(const Phylogeny& tree, int leaf_a, int leaf_b, ModelKind kind) {
    double d = 0.0;
    for (int e : tree.path_edges(leaf_a, leaf_b)) {
        const EdgeParams& p = tree.nodes[e].edge;
        d += beta_rate(p.eta, p.delta, p.lambda, kind) * p.t;
    }
    return d;
}

double nonclock_path_metric(const Phylogeny& tree, int leaf_a, int leaf_b) {
    double d = 0.0;
    for (int e : tree.path_edges(leaf_a, leaf_b)) {
        const EdgeParams& p = tree.nodes[e].edge;
        d += (p.eta + 0.5 * p.delta + 0.5 * p.lambda) * p.t;
    }
    return d;
}

DistanceMatrix true_distance_matrix(const Phylogeny& tree, MetricKind metric, ModelKind kind) {
    std::vector<int> leaves = tree.leaves();
    DistanceMatrix m(tree.leaf_names());
    for (std::size_t i = 0; i < leaves.size(); ++i)
        for (std::size_t j = i + 1; j < leaves.size(); ++j) {
            double d = metric == MetricKind::ClockBeta
                           ? clock_path_metric(tree, leaves[i], leaves[j], kind)
                           : nonclock_path_metric(tree, leaves[i], leaves[j]);
            m.set(i, j, d);
        }
    return m;
}

}  // namespace indelphy
