#pragma once

#include <cstdint>
#include <random>

namespace indelphy {

// Deterministic stream of variates. The engine (mt19937_64) is bit-specified by
// the standard; every conversion below is hand-rolled so that outputs are
// byte-identical across platforms and standard libraries.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // uniform in [0, 1), 53-bit resolution
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    // uniform in (0, 1], safe as a log() argument
    double uniform_pos() {
        return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53;
    }

    // waiting time at the given rate; rate 0 gives +inf (the event never fires)
    double exponential(double rate);

    // uniform integer in [0, n), n >= 1, unbiased (rejection on the tail)
    std::uint64_t below(std::uint64_t n);

    bool bernoulli(double p) { return uniform() < p; }

    // index drawn proportionally to the first n nonnegative weights
    int pick_weighted(const double* w, int n);

private:
    std::mt19937_64 eng_;
};

// Stream derivation: hashes the key tuple through SplitMix64 so that distinct
// (base, a, b, c) tuples give independent, reproducible streams.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c = 0);

RngStream make_stream(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                      std::uint64_t c = 0);

}  // namespace indelphy
