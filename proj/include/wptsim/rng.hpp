#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace wptsim::rng {

// Counter-based substreams: every consumer derives its own stream from
// (seed, purpose, indices), so adding a consumer never perturbs the draws
// seen by another. All draws are a pure function of the key and the call
// sequence, independent of thread scheduling and platform.

enum class Purpose : std::uint64_t {
    Layout = 1,
    Context = 2,
    Fade = 3,
    GainDrift = 4,
    Explore = 5,
    Instance = 6,
    Generic = 7,
};

constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Stream {
  public:
    explicit Stream(std::uint64_t state) : state_(state) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // [0, 1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // (0, hi]
    double uniform_open0(double hi) { return (1.0 - next_double()) * hi; }

    // Uniform over {0, ..., n-1}; n must be >= 1.
    int uniform_int(int n) {
        return static_cast<int>(next_double() * static_cast<double>(n)) % n;
    }

    // Box-Muller, one value per call so the draw count is fixed.
    double normal() {
        const double u1 = 1.0 - next_double();
        const double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    // Circularly symmetric complex Gaussian with E|z|^2 = 1, so |z|^2 ~ Exp(1).
    std::complex<double> cnormal_unit() {
        const double re = normal() * std::numbers::sqrt2 / 2.0;
        const double im = normal() * std::numbers::sqrt2 / 2.0;
        return {re, im};
    }

    // Exp(1); matches the law of |cnormal_unit()|^2.
    double exp1() { return -std::log(1.0 - next_double()); }

  private:
    std::uint64_t state_;
};

inline Stream substream(std::uint64_t seed, Purpose purpose, std::uint64_t a = 0,
                        std::uint64_t b = 0, std::uint64_t c = 0, std::uint64_t d = 0) {
    std::uint64_t h = mix64(seed ^ 0x243f6a8885a308d3ULL);
    h = mix64(h ^ mix64(static_cast<std::uint64_t>(purpose)));
    h = mix64(h ^ mix64(a ^ 0x13198a2e03707344ULL));
    h = mix64(h ^ mix64(b ^ 0xa4093822299f31d0ULL));
    h = mix64(h ^ mix64(c ^ 0x082efa98ec4e6c89ULL));
    h = mix64(h ^ mix64(d ^ 0x452821e638d01377ULL));
    return Stream(h);
}

}  // namespace wptsim::rng
