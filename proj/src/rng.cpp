#include "indelphy/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace indelphy {

double RngStream::exponential(double rate) {
    if (!(rate >= 0.0)) throw std::invalid_argument("exponential: rate must be nonnegative");
    if (rate == 0.0) return std::numeric_limits<double>::infinity();
    return -std::log(uniform_pos()) / rate;
}

std::uint64_t RngStream::below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("below: n must be >= 1");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = eng_();
    } while (x >= limit);
    return x % n;
}

int RngStream::pick_weighted(const double* w, int n) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += w[i];
    if (!(total > 0.0)) throw std::invalid_argument("pick_weighted: total weight must be positive");
    double x = uniform() * total;
    for (int i = 0; i < n; ++i) {
        x -= w[i];
        if (x < 0.0) return i;
    }
    return n - 1;
}

namespace {

std::uint64_t avalanche(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) {
    std::uint64_t h = avalanche(base + 0x9e3779b97f4a7c15ULL);
    h = avalanche(h + a + 0x9e3779b97f4a7c15ULL);
    h = avalanche(h + b + 0x9e3779b97f4a7c15ULL);
    h = avalanche(h + c + 0x9e3779b97f4a7c15ULL);
    return h;
}

RngStream make_stream(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                      std::uint64_t c) {
    return RngStream(derive_seed(base, a, b, c));
}

}  // namespace indelphy
