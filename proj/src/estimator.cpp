#include "indelphy/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "indelphy/parallel.hpp"

namespace indelphy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double deviation_scale(const SubstitutionModel& model) {
    return model.kind() == SubstitutionModel::Kind::Cfn ? 4.0 : 1.0;
}

}  // namespace

double window_deviation(const EvolvedSequence& s, const SubstitutionModel& model, SiteWindow w) {
    if (w.lo > w.hi || w.hi > s.size())
        throw std::invalid_argument("window_deviation: window out of bounds");
    if (model.kind() == SubstitutionModel::Kind::Cfn) {
        std::size_t zeros = 0;
        for (std::size_t i = w.lo; i < w.hi; ++i) zeros += s.states[i] == 0;
        return static_cast<double>(zeros) - 0.5 * static_cast<double>(w.hi - w.lo);
    }
    double sum = 0.0;
    for (std::size_t i = w.lo; i < w.hi; ++i) sum += model.w(s.states[i]);
    return sum;
}

double sequence_deviation(const EvolvedSequence& s, const SubstitutionModel& model) {
    return window_deviation(s, model, {0, s.size()});
}

std::vector<double> block_deviations(const EvolvedSequence& s, const BlockPartition& part,
                                     const SubstitutionModel& model) {
    if (s.size() < part.used_prefix())
        throw std::invalid_argument("block_deviations: sequence shorter than the partition prefix");
    std::vector<double> out(part.blocks);
    for (std::size_t i = 1; i <= part.blocks; ++i)
        out[i - 1] = window_deviation(s, model, part.block_window(i));
    return out;
}

double epartdist(const std::vector<double>& dev_a, const std::vector<double>& dev_b,
                 const BlockPartition& part) {
    if (dev_a.size() != part.blocks || dev_b.size() != part.blocks)
        throw std::invalid_argument("epartdist: deviation vectors do not match the partition");
    double sum = 0.0;
    for (std::size_t i = 0; i < part.blocks; i += 2) sum += dev_a[i] * dev_b[i];
    return 2.0 * sum / static_cast<double>(part.blocks);
}

double prelog_statistic(const EvolvedSequence& a, const EvolvedSequence& b,
                        const BlockPartition& part, const SubstitutionModel& model) {
    std::vector<double> da = block_deviations(a, part, model);
    std::vector<double> db = block_deviations(b, part, model);
    return deviation_scale(model) / static_cast<double>(part.ell) * epartdist(da, db, part);
}

double clock_correct(double prelog, double eps_log) {
    if (!(prelog > eps_log)) return kInf;
    return -2.0 * std::log(prelog);
}

double full_sequence_edist(const EvolvedSequence& a, const EvolvedSequence& b,
                           const SubstitutionModel& model) {
    return sequence_deviation(a, model) * sequence_deviation(b, model);
}

double hamming_corrected(const EvolvedSequence& a, const EvolvedSequence& b,
                         const SubstitutionModel& model, double eps_log) {
    if (a.size() != b.size())
        throw std::invalid_argument("hamming_corrected: sequences must have equal length");
    if (a.size() == 0) throw std::invalid_argument("hamming_corrected: empty sequences");
    std::size_t mism = 0;
    for (std::size_t i = 0; i < a.size(); ++i) mism += a.states[i] != b.states[i];
    double p = static_cast<double>(mism) / static_cast<double>(a.size());
    // binary alphabet: -1/2 ln(1-2p); four states: -3/4 ln(1-4p/3)
    double arg, scale;
    if (model.n_states() == 2) {
        arg = 1.0 - 2.0 * p;
        scale = 0.5;
    } else {
        arg = 1.0 - 4.0 * p / 3.0;
        scale = 0.75;
    }
    if (!(arg > eps_log)) return kInf;
    return -scale * std::log(arg);
}

double pair_distance(const EvolvedSequence& a, const EvolvedSequence& b,
                     const SubstitutionModel& model, const BlockPartition& part,
                     EstimatorVariant variant, double eps_log) {
    switch (variant) {
        case EstimatorVariant::ClockBlock:
        case EstimatorVariant::NonclockBlock: {
            if (a.size() < part.k0 || b.size() < part.k0) return kInf;
            double x = prelog_statistic(a, b, part, model);
            if (!(x > eps_log)) return kInf;
            return variant == EstimatorVariant::ClockBlock ? -2.0 * std::log(x) : -std::log(x);
        }
        case EstimatorVariant::FullSequence: {
            if (a.size() == 0 || b.size() == 0) return kInf;
            double x = deviation_scale(model) * full_sequence_edist(a, b, model) /
                       std::sqrt(static_cast<double>(a.size()) * static_cast<double>(b.size()));
            if (!(x > eps_log)) return kInf;
            return -std::log(x);
        }
        case EstimatorVariant::Hamming: {
            if (a.size() != b.size() || a.size() == 0) return kInf;
            return hamming_corrected(a, b, model, eps_log);
        }
    }
    return kInf;
}

DistanceMatrix distance_matrix(const std::vector<EvolvedSequence>& seqs,
                               const std::vector<std::string>& names,
                               const SubstitutionModel& model, const EstimatorConfig& cfg,
                               int threads) {
    if (seqs.size() != names.size())
        throw std::invalid_argument("distance_matrix: need one name per sequence");
    const std::size_t n = seqs.size();
    if (n < 2) throw std::invalid_argument("distance_matrix: need at least two sequences");

    std::size_t k0 = cfg.k0;
    if (k0 == 0) {
        k0 = seqs[0].size();
        for (const auto& s : seqs) k0 = std::min(k0, s.size());
        if (k0 == 0) throw std::invalid_argument("distance_matrix: empty sequence present");
    }

    const bool blockwise = cfg.variant == EstimatorVariant::ClockBlock ||
                           cfg.variant == EstimatorVariant::NonclockBlock;
    BlockPartition part;
    if (blockwise) part = BlockPartition::from_prefix(k0, cfg.zeta);
    else part.k0 = k0;

    DistanceMatrix m(names);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

    // per-sequence block deviations are shared across all pairs
    std::vector<std::vector<double>> devs(n);
    if (blockwise) {
        parallel_for(n, threads, [&](std::size_t i) {
            if (seqs[i].size() >= part.k0 && seqs[i].size() >= part.used_prefix())
                devs[i] = block_deviations(seqs[i], part, model);
        });
    }

    std::vector<double> out(pairs.size());
    parallel_for(pairs.size(), threads, [&](std::size_t idx) {
        auto [i, j] = pairs[idx];
        if (blockwise) {
            if (devs[i].empty() || devs[j].empty()) {
                out[idx] = kInf;
                return;
            }
            double x = deviation_scale(model) / static_cast<double>(part.ell) *
                       epartdist(devs[i], devs[j], part);
            if (!(x > cfg.eps_log)) {
                out[idx] = kInf;
                return;
            }
            out[idx] = cfg.variant == EstimatorVariant::ClockBlock ? -2.0 * std::log(x)
                                                                   : -std::log(x);
        } else {
            out[idx] = pair_distance(seqs[i], seqs[j], model, part, cfg.variant, cfg.eps_log);
        }
    });
    for (std::size_t idx = 0; idx < pairs.size(); ++idx)
        m.set(pairs[idx].first, pairs[idx].second, out[idx]);
    return m;
}

}  // namespace indelphy
