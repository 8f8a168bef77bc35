#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "indelphy/analytics.hpp"

using namespace indelphy;

namespace {
const EdgeParams kEx{1.0, 0.0, 0.2, 0.1};
const EdgeParams kCrit{1.0, 0.0, 0.2, 0.2};
const EdgeParams kCanon{1.0, 0.1, 0.05, 0.02};
}  // namespace

TEST_CASE("generating function matches hand-computed values") {
    CHECK(std::abs(length_mgf(0.0, kEx) - 0.1737877) < 1e-6);
    CHECK(std::abs(length_mgf(1.0, kEx) - 1.0) < 1e-12);
    CHECK(std::abs(length_mgf(0.5, kCrit) - 0.6 / 1.1) < 1e-12);
    CHECK(std::abs(length_mgf(0.0, EdgeParams{2.0, 0.0, 0.1, 0.0}) - (1.0 - std::exp(-0.2))) <
          1e-12);
}

TEST_CASE("generating function is monotone on [0, 1]") {
    for (const EdgeParams& p : {kEx, kCrit, EdgeParams{0.5, 0.0, 0.4, 0.1},
                                EdgeParams{2.0, 0.0, 0.05, 0.3}}) {
        double prev = length_mgf(0.0, p);
        for (int k = 1; k <= 20; ++k) {
            double cur = length_mgf(0.05 * k, p);
            CHECK(cur >= prev - 1e-12);
            prev = cur;
        }
    }
}

TEST_CASE("moments agree with generating-function derivatives") {
    const double h = 1e-4;
    for (const EdgeParams& p : {kEx, EdgeParams{0.7, 0.0, 0.3, 0.12},
                                EdgeParams{1.5, 0.0, 0.02, 0.25}}) {
        double f1 = (length_mgf(1 + h, p) - length_mgf(1 - h, p)) / (2 * h);
        double m = expected_length(p, 1.0);
        CHECK(std::abs(f1 - m) < 1e-6);
        double f2 = (length_mgf(1 + h, p) - 2.0 + length_mgf(1 - h, p)) / (h * h);
        double var = f2 + m - m * m;
        CHECK(std::abs(var - length_variance(p, 1.0)) < 1e-5);
    }
}

TEST_CASE("length mean and variance closed forms") {
    CHECK(std::abs(expected_length(kEx, 1000.0) - 904.837418) < 1e-3);
    CHECK(std::abs(length_variance(kEx, 1.0) - 0.2583200) < 1e-6);
    CHECK(std::abs(length_variance(kCrit, 1.0) - 0.4) < 1e-12);
    CHECK(std::abs(expected_length(kCrit, 100.0) - 100.0) < 1e-9);
}

TEST_CASE("survival, new sites and flip probabilities") {
    CHECK(std::abs(survival_probability(EdgeParams{1.0, 0.0, 0.25, 0.1}) - 0.7788007830714049) <
          1e-12);
    CHECK(std::abs(new_sites_expectation(kEx) - 0.0861067) < 1e-6);
    CHECK(std::abs(flip_probability(0.5, 1.0) - 0.3160602794142788) < 1e-12);
    CHECK(flip_probability(0.0, 3.0) == 0.0);
    CHECK(std::abs(flip_probability(50.0, 50.0) - 0.5) < 1e-12);
}

TEST_CASE("channel stats compose the per-edge summaries") {
    ChannelStats cs = channel_stats(kEx);
    CHECK(std::abs(cs.m - std::exp(0.1 - 0.2)) < 1e-12);
    CHECK(std::abs(cs.d - std::exp(-0.2)) < 1e-12);
    CHECK(std::abs(cs.m - cs.d - new_sites_expectation(kEx)) < 1e-12);
}

TEST_CASE("deviation decay rates") {
    EdgeParams p{1.0, 0.1, 0.05, 0.0};
    CHECK(std::abs(deviation_decay(p, ModelKind::Cfn) - std::exp(-0.25)) < 1e-12);
    CHECK(std::abs(deviation_decay(p, ModelKind::Gtr) - std::exp(-0.15)) < 1e-12);
}

TEST_CASE("fork and clock expressions agree on the canonical set") {
    double fork = fork_expected_distance(kCanon, kCanon, kCanon, 1000.0, ModelKind::Cfn);
    CHECK(std::abs(fork - 147.1512) < 1e-3);
    double kap = clock_kappa(1000.0, 0.05, 0.02, 2.0);
    CHECK(std::abs(kap - 235.441133) < 1e-3);
    CHECK(std::abs(clock_expected_distance(0.1, 0.05, 0.02, 1.0, kap) - fork) < 1e-9);
    CHECK(std::abs(beta_rate(0.1, 0.05, 0.02, ModelKind::Cfn) - 0.47) < 1e-12);
    CHECK(std::abs(beta_rate(0.1, 0.05, 0.02, ModelKind::Gtr) - 0.27) < 1e-12);

    double fg = fork_expected_distance(kCanon, kCanon, kCanon, 1000.0, ModelKind::Gtr);
    CHECK(std::abs(fg - 1000.0 * std::exp(-0.33)) < 1e-6);
}

TEST_CASE("path metrics on hand-built trees") {
    Phylogeny fork = make_fork(kCanon, kCanon, kCanon);
    std::vector<int> fl = fork.leaves();
    CHECK(std::abs(clock_path_metric(fork, fl[0], fl[1]) - 0.94) < 1e-12);

    Phylogeny cherry = make_cherry(kCanon, kCanon);
    std::vector<int> cl = cherry.leaves();
    CHECK(std::abs(nonclock_path_metric(cherry, cl[0], cl[1]) - 0.27) < 1e-12);

    Phylogeny bal;
    int root = bal.add_root();
    int u1 = bal.add_child(root, kCanon);
    int u2 = bal.add_child(root, kCanon);
    bal.add_child(u1, kCanon, "a");
    bal.add_child(u1, kCanon, "b");
    bal.add_child(u2, kCanon, "c");
    bal.add_child(u2, kCanon, "d");
    DistanceMatrix m = true_distance_matrix(bal, MetricKind::ClockBeta, ModelKind::Cfn);
    int ia = m.index_of("a"), ib = m.index_of("b"), ic = m.index_of("c"), id = m.index_of("d");
    CHECK(std::abs(m.at(ia, ib) - 0.94) < 1e-12);
    CHECK(std::abs(m.at(ic, id) - 0.94) < 1e-12);
    CHECK(std::abs(m.at(ia, ic) - 1.88) < 1e-12);
    CHECK(std::abs(m.at(ib, id) - 1.88) < 1e-12);
    CHECK(m.at(ia, ia) == 0.0);
}

TEST_CASE("edge parameter validation") {
    CHECK_THROWS_AS((EdgeParams{-1.0, 0.0, 0.0, 0.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((EdgeParams{1.0, 0.0, -0.2, 0.0}.validate()), std::invalid_argument);
    CHECK_NOTHROW(kCanon.validate());
}
