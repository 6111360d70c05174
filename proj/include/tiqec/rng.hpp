#pragma once

#include <cmath>
#include <cstdint>

#include "tiqec/common.hpp"

namespace tiqec {

// xoshiro256** with splitmix64 seeding. Hand-rolled normal/uniform draws so
// that streams are bit-reproducible across standard libraries and platforms;
// std::normal_distribution is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& w : s_) w = splitmix64(x);
        has_spare_ = false;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0,1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    // Standard normal via Box-Muller (cached second value).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * kPi * u2);
        has_spare_ = true;
        return r * std::cos(2.0 * kPi * u2);
    }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        x += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4]{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Deterministic per-(trial, source) stream derivation from a master seed.
// Trials and noise sources get statistically independent streams.
inline Rng derive_stream(std::uint64_t master, std::uint64_t trial, std::uint64_t source = 0) {
    std::uint64_t x = master;
    std::uint64_t a = Rng::splitmix64(x);
    x ^= 0x517cc1b727220a95ULL + trial * 0x2545f4914f6cdd1dULL;
    std::uint64_t b = Rng::splitmix64(x);
    x ^= 0xd1b54a32d192ed03ULL + source * 0x9e3779b97f4a7c15ULL;
    std::uint64_t c = Rng::splitmix64(x);
    return Rng(a ^ (b * 0x9e3779b97f4a7c15ULL) ^ (c << 1));
}

}  // namespace tiqec
