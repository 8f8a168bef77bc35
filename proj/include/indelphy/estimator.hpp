#pragma once

#include <vector>

#include "indelphy/block_partition.hpp"
#include "indelphy/distance_matrix.hpp"
#include "indelphy/simulator.hpp"
#include "indelphy/substitution_model.hpp"

namespace indelphy {

enum class EstimatorVariant {
    ClockBlock,     // -2 ln of the blockwise correlation statistic
    NonclockBlock,  // -ln of the same statistic (rate-mixed additive metric)
    FullSequence,   // whole-sequence correlation with length normalization
    Hamming,        // positionwise mismatch with the classical correction
};

struct EstimatorConfig {
    std::size_t k0 = 0;  // 0: use the minimum observed sequence length
    double zeta = 0.6;
    EstimatorVariant variant = EstimatorVariant::ClockBlock;
    double eps_log = 1e-12;  // correlation floor before the +inf sentinel
    double delta_u_c = 3.0;  // diagnostics-only slack constant
};

// Deviation of one sequence window from the stationary mean: number of zeros
// minus half the window for CFN, sum of spectral weights w(state) otherwise.
double window_deviation(const EvolvedSequence& s, const SubstitutionModel& model, SiteWindow w);
double sequence_deviation(const EvolvedSequence& s, const SubstitutionModel& model);

// Per-block deviations over the partition prefix; requires the sequence to
// cover it.
std::vector<double> block_deviations(const EvolvedSequence& s, const BlockPartition& part,
                                     const SubstitutionModel& model);

// Mean over odd blocks (1-based 1, 3, ...) of the deviation products:
// (2/L) * sum_j dev_a[2j] * dev_b[2j].
double epartdist(const std::vector<double>& dev_a, const std::vector<double>& dev_b,
                 const BlockPartition& part);

// Blockwise correlation statistic: epartdist scaled by 4/ell (CFN deviations)
// or 1/ell (spectral deviations); its expectation contracts exponentially in
// the path metric.
double prelog_statistic(const EvolvedSequence& a, const EvolvedSequence& b,
                        const BlockPartition& part, const SubstitutionModel& model);

// -2 ln(x) with the +inf sentinel below eps_log.
double clock_correct(double prelog, double eps_log = 1e-12);

// Whole-sequence deviation product (the fork/clock validation statistic).
double full_sequence_edist(const EvolvedSequence& a, const EvolvedSequence& b,
                           const SubstitutionModel& model);

// Positionwise mismatch correction; sequences must have equal positive length.
double hamming_corrected(const EvolvedSequence& a, const EvolvedSequence& b,
                         const SubstitutionModel& model, double eps_log = 1e-12);

// One pairwise distance under the configured variant; +inf sentinel when the
// pair is undefined (short sequences, nonpositive correlation, mismatched
// lengths for hamming).
double pair_distance(const EvolvedSequence& a, const EvolvedSequence& b,
                     const SubstitutionModel& model, const BlockPartition& part,
                     EstimatorVariant variant, double eps_log);

// Full matrix over named sequences. k0 = 0 resolves to the minimum observed
// length. Pairs run in parallel when threads > 1; output is identical for any
// thread count.
DistanceMatrix distance_matrix(const std::vector<EvolvedSequence>& seqs,
                               const std::vector<std::string>& names,
                               const SubstitutionModel& model, const EstimatorConfig& cfg,
                               int threads = 1);

}  // namespace indelphy
