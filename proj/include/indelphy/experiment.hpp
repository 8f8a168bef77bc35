#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "indelphy/estimator.hpp"
#include "indelphy/report.hpp"
#include "indelphy/substitution_model.hpp"
#include "indelphy/tree_builder.hpp"

namespace indelphy {

// End-to-end sweep configuration. Field names double as CLI flag / config-file
// key names.
struct ExperimentConfig {
    std::size_t n = 8;
    double f = 0.1;
    double g = 0.3;
    double eta = 0.1;
    double delta = 0.02;
    double lambda = 0.02;
    double eta_lo = 0.0;  // bounded-rates mode when eta_hi > 0: per-edge eta
    double eta_hi = 0.0;
    bool balanced = false;
    std::size_t k_r = 100000;
    std::vector<std::size_t> k_r_sweep;  // optional; replaces k_r stage by stage
    std::size_t k0 = 0;                  // 0: shortest leaf, per replicate
    double zeta = 0.6;
    std::string variant = "clock";  // clock | nonclock | full | hamming
    std::string method = "buneman";  // buneman | nj
    std::string model = "cfn";       // cfn | jc | gtr
    std::string gtr_file;
    std::size_t replicates = 20;
    std::uint64_t seed = 1;
    double min_success = 0.0;  // exact-topology frequency gate; 0 = report only
    int threads = 0;           // 0 = all hardware threads
    double eps_log = 1e-12;

    std::vector<std::pair<std::string, std::string>> echo() const;
};

SubstitutionModel model_from_config(const std::string& model, const std::string& gtr_file);
EstimatorVariant variant_from_name(const std::string& name);
BuildMethod method_from_name(const std::string& name);

// Per replicate: random tree -> evolve -> distance matrix -> reconstruction ->
// symmetric split distance vs the truth; errors are recorded per replicate and
// the run continues. With k_r_sweep set, the whole schedule runs per stage and
// a nonincreasing-failure trend check is added.
RunReport run_experiment(const ExperimentConfig& cfg);

// -------- named validation checks --------

struct ValidateConfig {
    std::uint64_t seed = 1;
    int threads = 0;
    double reps_scale = 1.0;         // multiplies every default replicate count
    std::vector<std::string> only;   // check names to run; empty = all
};

// Grid of the per-edge moment formulas: Monte Carlo mean/variance/survival/
// flip against the closed forms for (eta, delta, lambda) in {0.02,0.1,0.3}^3
// and t in {0.5, 1, 2}, single-site replicates.
std::vector<CheckResult> channel_grid_checks(std::size_t reps, std::uint64_t seed, int threads);

// The fixed worked examples of every closed-form operation, evaluated exactly.
std::vector<CheckResult> analytic_example_checks();

// Generating-function sanity: valid PGF on [0,1], derivative at 1, agreement
// of the critical closed form with the generic one near delta = lambda.
std::vector<CheckResult> mgf_property_checks(std::uint64_t seed);

// Fork and clock closed forms agree on random parameter draws.
std::vector<CheckResult> fork_clock_identity_checks(std::size_t draws, std::uint64_t seed);

// Monte Carlo fork statistic vs the closed form (two-state and spectral).
std::vector<CheckResult> fork_mean_checks(std::size_t reps, std::uint64_t seed, int threads);

// Fixed-root deviation contraction per edge (two-state and spectral).
std::vector<CheckResult> deviation_decay_checks(std::size_t reps, std::uint64_t seed, int threads);

// Sequence-length concentration: |K - k_r M_t| rarely exceeds
// C sqrt(k_r ln k_r).
std::vector<CheckResult> length_concentration_checks(std::size_t reps, std::uint64_t seed,
                                                     int threads);

// Whole-sequence joint-survivor count vs k_u D_t^2.
std::vector<CheckResult> joint_survival_checks(std::size_t reps, std::uint64_t seed, int threads);

// Fork-level block diagnostics at k0 = 10^4: good-event frequency, per-block
// joint-survivor means, alternating-block independence, the exact conditional
// correlation identity, and the block-product variance bound.
std::vector<CheckResult> good_event_checks(std::size_t reps, std::uint64_t seed, int threads);

// Blockwise statistic across k0 in {10^3, 10^4, 10^5}: means vs e^{-beta t},
// STD log-log slope vs (3 zeta - 1)/2, and tail-probability decay.
std::vector<CheckResult> block_scaling_checks(std::size_t reps, std::uint64_t seed, int threads);

// Adding a constant to all off-diagonal entries never changes quartet calls.
std::vector<CheckResult> monotone_shift_checks(std::uint64_t seed);

// Two-state spectral model reproduces the binary deviation arithmetic exactly.
std::vector<CheckResult> gtr_reduction_checks(std::uint64_t seed);

// Random reversible rate matrices: eigenvector residuals within 1e-10.
std::vector<CheckResult> spectral_contract_checks(std::size_t draws, std::uint64_t seed);

// Rate-mixed metric: Monte Carlo pre-log mean on an asymmetric fork, and
// four-point margins of the exact metric on random bounded-rates trees.
std::vector<CheckResult> nonclock_checks(std::size_t reps, std::uint64_t seed, int threads);

// Generated clock trees: ultrametric, edge times in range, diameter within
// the closed-form bounds.
std::vector<CheckResult> tree_generation_checks(std::size_t trees, std::uint64_t seed);

// All-rates-zero end-to-end run: no errors, all pairwise distances equal.
std::vector<CheckResult> pipeline_smoke_checks(std::uint64_t seed);

// Disjoint replicate streams look independent (lag correlation near 0).
std::vector<CheckResult> rng_stream_checks(std::size_t reps, std::uint64_t seed);

// Same config + seed twice -> byte-identical machine-readable report tables.
std::vector<CheckResult> reproducibility_checks(std::uint64_t seed);

// Names that must appear in a full validation run; validate_analytics appends
// a failing coverage row if any is missing.
std::vector<std::string> required_check_names();

RunReport validate_analytics(const ValidateConfig& cfg);

}  // namespace indelphy
