#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "indelphy/estimator.hpp"
#include "indelphy/rng.hpp"

using namespace indelphy;

namespace {

EvolvedSequence seq_of(std::vector<std::uint8_t> states) {
    EvolvedSequence s;
    s.states = std::move(states);
    return s;
}

EvolvedSequence random_binary(std::size_t len, std::uint64_t seed) {
    RngStream rng(seed);
    EvolvedSequence s;
    for (std::size_t i = 0; i < len; ++i)
        s.states.push_back(static_cast<std::uint8_t>(rng.below(2)));
    return s;
}

}  // namespace

TEST_CASE("window and sequence deviations") {
    SubstitutionModel cfn = SubstitutionModel::cfn();
    SubstitutionModel two = SubstitutionModel::two_state_symmetric();
    EvolvedSequence s = seq_of({0, 1, 0, 0});
    CHECK(window_deviation(s, cfn, SiteWindow{0, 4}) == 1.0);
    CHECK(window_deviation(s, cfn, SiteWindow{0, 2}) == 0.0);
    CHECK(window_deviation(s, cfn, SiteWindow{1, 2}) == -0.5);
    CHECK(sequence_deviation(s, cfn) == 1.0);
    CHECK(sequence_deviation(s, two) == 2.0);
    CHECK(window_deviation(s, two, SiteWindow{0, 4}) == 2.0 * window_deviation(s, cfn, SiteWindow{0, 4}));
}

TEST_CASE("block deviations require the full prefix") {
    SubstitutionModel cfn = SubstitutionModel::cfn();
    BlockPartition part = BlockPartition::from_fields(8, 2, 4);
    EvolvedSequence s = seq_of({0, 0, 1, 1, 0, 1, 0, 0});
    std::vector<double> dev = block_deviations(s, part, cfn);
    REQUIRE(dev.size() == 4);
    CHECK(dev[0] == 1.0);
    CHECK(dev[1] == -1.0);
    CHECK(dev[2] == 0.0);
    CHECK(dev[3] == 1.0);
    EvolvedSequence short_s = seq_of({0, 0, 1});
    CHECK_THROWS_AS(block_deviations(short_s, part, cfn), std::invalid_argument);
}

TEST_CASE("epartdist averages odd-block products") {
    BlockPartition part = BlockPartition::from_fields(8, 2, 4);
    std::vector<double> a = {1, 2, 3, 4};
    std::vector<double> b = {1, 1, 1, 1};
    CHECK(epartdist(a, b, part) == doctest::Approx(2.0));
    std::vector<double> c = {-1, 5, 2, -7};
    CHECK(epartdist(a, c, part) == doctest::Approx(0.5 * (1 * -1 + 3 * 2)));
}

TEST_CASE("prelog statistic carries the model scale") {
    SubstitutionModel cfn = SubstitutionModel::cfn();
    SubstitutionModel two = SubstitutionModel::two_state_symmetric();
    BlockPartition part = BlockPartition::from_fields(8, 2, 4);
    EvolvedSequence z = seq_of({0, 0, 0, 0, 0, 0, 0, 0});
    CHECK(prelog_statistic(z, z, part, cfn) == doctest::Approx(2.0));
    CHECK(prelog_statistic(z, z, part, two) == doctest::Approx(2.0));
}

TEST_CASE("clock correction and sentinels") {
    CHECK(clock_correct(std::exp(-0.47)) == doctest::Approx(0.94));
    CHECK(clock_correct(1.0) == 0.0);
    CHECK(std::isinf(clock_correct(0.0)));
    CHECK(std::isinf(clock_correct(-0.25)));
    CHECK(std::isinf(clock_correct(1e-13)));
    CHECK(std::isinf(clock_correct(std::numeric_limits<double>::quiet_NaN())));
    CHECK(std::isfinite(clock_correct(1e-3)));
}

TEST_CASE("hamming correction on both alphabets") {
    SubstitutionModel cfn = SubstitutionModel::cfn();
    EvolvedSequence a = seq_of({0, 0, 0, 0});
    EvolvedSequence b = seq_of({1, 0, 0, 0});
    CHECK(hamming_corrected(a, b, cfn) == doctest::Approx(0.34657359).epsilon(1e-6));
    CHECK(hamming_corrected(a, a, cfn) == 0.0);
    EvolvedSequence half = seq_of({1, 1, 0, 0});
    CHECK(std::isinf(hamming_corrected(a, half, cfn)));

    SubstitutionModel jc = SubstitutionModel::jukes_cantor();
    EvolvedSequence c = seq_of({0, 1, 2, 3});
    EvolvedSequence d = seq_of({1, 1, 2, 3});
    CHECK(hamming_corrected(c, d, jc) == doctest::Approx(0.3040988311).epsilon(1e-9));
}

TEST_CASE("pair distance sentinels per variant") {
    SubstitutionModel cfn = SubstitutionModel::cfn();
    BlockPartition part = BlockPartition::from_prefix(64, 0.6);
    EvolvedSequence long_a = random_binary(64, 1);
    EvolvedSequence long_b = random_binary(64, 2);
    EvolvedSequence short_c = random_binary(10, 3);

    CHECK(std::isinf(pair_distance(long_a, short_c, cfn, part, EstimatorVariant::ClockBlock,
                                   1e-12)));
    CHECK(std::isinf(pair_distance(long_a, short_c, cfn, part, EstimatorVariant::Hamming,
                                   1e-12)));
    double h = pair_distance(long_a, long_b, cfn, part, EstimatorVariant::Hamming, 1e-12);
    CHECK((std::isfinite(h) || std::isinf(h)));

    EvolvedSequence pos = seq_of(std::vector<std::uint8_t>(64, 0));
    EvolvedSequence neg = seq_of(std::vector<std::uint8_t>(64, 1));
    CHECK(std::isinf(
        pair_distance(pos, neg, cfn, part, EstimatorVariant::FullSequence, 1e-12)));
    CHECK(std::isfinite(
        pair_distance(pos, pos, cfn, part, EstimatorVariant::FullSequence, 1e-12)));
}

TEST_CASE("distance matrix structure and determinism") {
    SubstitutionModel cfn = SubstitutionModel::cfn();
    std::vector<EvolvedSequence> seqs;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < 8; ++i) {
        seqs.push_back(random_binary(600, 100 + i));
        names.push_back("s" + std::to_string(i));
    }
    EstimatorConfig cfg;
    cfg.k0 = 600;
    DistanceMatrix serial = distance_matrix(seqs, names, cfn, cfg, 1);
    DistanceMatrix parallel = distance_matrix(seqs, names, cfn, cfg, 4);
    CHECK(serial.names == parallel.names);
    CHECK(serial.values == parallel.values);
    for (std::size_t i = 0; i < serial.n(); ++i) {
        CHECK(serial.at(i, i) == 0.0);
        for (std::size_t j = 0; j < serial.n(); ++j) CHECK(serial.at(i, j) == serial.at(j, i));
    }

    std::vector<EvolvedSequence> twins = {seqs[0], seqs[0], seqs[0]};
    std::vector<std::string> tn = {"a", "b", "c"};
    DistanceMatrix tm = distance_matrix(twins, tn, cfn, cfg, 1);
    CHECK(tm.at(0, 1) == tm.at(0, 2));
    CHECK(tm.at(0, 1) == tm.at(1, 2));
}

TEST_CASE("distance matrix resolves k0 to the shortest sequence") {
    SubstitutionModel cfn = SubstitutionModel::cfn();
    std::vector<EvolvedSequence> seqs = {random_binary(300, 5), random_binary(260, 6),
                                         random_binary(281, 7)};
    std::vector<std::string> names = {"x", "y", "z"};
    EstimatorConfig cfg;
    cfg.k0 = 0;
    DistanceMatrix m = distance_matrix(seqs, names, cfn, cfg, 1);

    BlockPartition part = BlockPartition::from_prefix(260, 0.6);
    double expect = pair_distance(seqs[0], seqs[1], cfn, part, EstimatorVariant::ClockBlock,
                                  cfg.eps_log);
    CHECK(m.at(0, 1) == expect);
}
