#pragma once

#include "indelphy/distance_matrix.hpp"
#include "indelphy/edge_params.hpp"
#include "indelphy/phylogeny.hpp"
#include "indelphy/substitution_model.hpp"

namespace indelphy {

// Closed forms for the per-site branching process on one edge and their
// compositions along paths of a tree.

// Per-edge channel summary: M = expected per-site length factor, D = survival
// probability of an original site, Gamma = expected family size contributed by
// one insertion slot over the edge, flip = CFN disagreement probability.
struct ChannelStats {
    double m = 1.0;
    double d = 1.0;
    double gamma = 0.0;
    double flip = 0.0;
};

ChannelStats channel_stats(const EdgeParams& p);

// Probability generating function of the single-site descendant count,
// evaluated at s. Uses the critical-case form when delta ~= lambda. Throws
// std::domain_error when s hits the pole of the closed form.
double length_mgf(double s, const EdgeParams& p);

double expected_length(const EdgeParams& p, double k_r);
double length_variance(const EdgeParams& p, double k_r);
// expected number of sites that descend from one ancestral site but are not
// the surviving original
double new_sites_expectation(const EdgeParams& p);
double survival_probability(const EdgeParams& p);
double flip_probability(double eta, double t);

enum class ModelKind { Cfn, Gtr };

// e^{-(2 eta + delta) t} (CFN) or e^{-(eta + delta) t} (spectral coordinates):
// the per-edge contraction of the sequence deviation.
double deviation_decay(const EdgeParams& p, ModelKind kind);

// Expected evolutionary correlation of the fork r -> u -> {a, b}:
// CFN carries the (1/4) deviation scale, spectral coordinates carry scale 1.
double fork_expected_distance(const EdgeParams& eu, const EdgeParams& ea, const EdgeParams& eb,
                              double k_r, ModelKind kind);

// Molecular-clock form: decay rate beta and the normalization kappa.
double beta_rate(double eta, double delta, double lambda, ModelKind kind = ModelKind::Cfn);
double clock_kappa(double k_r, double delta, double lambda, double total_time,
                   ModelKind kind = ModelKind::Cfn);
double clock_expected_distance(double eta, double delta, double lambda, double t, double kappa,
                               ModelKind kind = ModelKind::Cfn);

// Additive path metrics on a tree, between two leaves.
// Clock form: sum over path edges of beta_e * t_e (one-way times double up).
double clock_path_metric(const Phylogeny& tree, int leaf_a, int leaf_b,
                         ModelKind kind = ModelKind::Cfn);
// Rate-mixed form from the spectral analysis:
// sum over path edges of (eta_e + delta_e/2 + lambda_e/2) * t_e.
double nonclock_path_metric(const Phylogeny& tree, int leaf_a, int leaf_b);

enum class MetricKind { ClockBeta, Nonclock };

// Exact additive leaf metric of the tree under the chosen edge weights;
// the reconstruction oracle for simulated experiments.
DistanceMatrix true_distance_matrix(const Phylogeny& tree, MetricKind metric,
                                    ModelKind kind = ModelKind::Cfn);

}  // namespace indelphy
