#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "indelphy/rng.hpp"

using namespace indelphy;

TEST_CASE("identical seeds give identical streams") {
    RngStream a(42), b(42);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("derive_seed separates key tuples") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t base : {0ull, 1ull, 77ull})
        for (std::uint64_t a = 0; a < 5; ++a)
            for (std::uint64_t b = 0; b < 5; ++b)
                for (std::uint64_t c = 0; c < 5; ++c) seen.insert(derive_seed(base, a, b, c));
    CHECK(seen.size() == 3u * 5 * 5 * 5);
}

TEST_CASE("uniform ranges") {
    RngStream r(7);
    for (int i = 0; i < 20000; ++i) {
        double u = r.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        double v = r.uniform_pos();
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("below is unbiased over its range") {
    RngStream r(11);
    const std::uint64_t n = 7;
    const int draws = 70000;
    std::vector<int> counts(n, 0);
    for (int i = 0; i < draws; ++i) {
        std::uint64_t v = r.below(n);
        REQUIRE(v < n);
        ++counts[v];
    }
    double p = 1.0 / static_cast<double>(n);
    double sd = std::sqrt(p * (1 - p) * draws);
    for (std::uint64_t k = 0; k < n; ++k)
        CHECK(std::abs(counts[k] - draws * p) < 5 * sd);
    for (int i = 0; i < 100; ++i) CHECK(r.below(1) == 0);
}

TEST_CASE("exponential matches its rate") {
    RngStream r(13);
    const int n = 20000;
    double sum = 0;
    for (int i = 0; i < n; ++i) {
        double x = r.exponential(2.0);
        REQUIRE(x > 0.0);
        sum += x;
    }
    double mean = sum / n;
    CHECK(std::abs(mean - 0.5) < 5 * 0.5 / std::sqrt(static_cast<double>(n)));
    CHECK(std::isinf(r.exponential(0.0)));
}

TEST_CASE("bernoulli frequency") {
    RngStream r(17);
    const int n = 50000;
    int hits = 0;
    for (int i = 0; i < n; ++i) hits += r.bernoulli(0.3);
    double sd = std::sqrt(0.3 * 0.7 * n);
    CHECK(std::abs(hits - 0.3 * n) < 5 * sd);
}

TEST_CASE("pick_weighted respects proportions") {
    RngStream r(19);
    const double w[3] = {1.0, 2.0, 3.0};
    const int n = 60000;
    int counts[3] = {0, 0, 0};
    for (int i = 0; i < n; ++i) {
        int k = r.pick_weighted(w, 3);
        REQUIRE(k >= 0);
        REQUIRE(k < 3);
        ++counts[k];
    }
    for (int k = 0; k < 3; ++k) {
        double p = w[k] / 6.0;
        CHECK(std::abs(counts[k] - p * n) < 5 * std::sqrt(p * (1 - p) * n));
    }
    const double wz[3] = {0.0, 1.0, 0.0};
    for (int i = 0; i < 200; ++i) CHECK(r.pick_weighted(wz, 3) == 1);
}

TEST_CASE("make_stream reproduces and separates") {
    CHECK(make_stream(9, 1, 2, 3).next_u64() == make_stream(9, 1, 2, 3).next_u64());
    CHECK(make_stream(9, 1, 2, 3).next_u64() != make_stream(9, 1, 2, 4).next_u64());
    CHECK(make_stream(9, 1, 2, 3).next_u64() != make_stream(10, 1, 2, 3).next_u64());
}
