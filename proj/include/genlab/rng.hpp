#pragma once

#include <cstdint>
#include <cmath>
#include <numbers>
#include <string_view>
#include <vector>

namespace genlab {

// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ull;
    }
    return h;
}

/**
 * Counter-based, splittable PRNG.
 *
 * A stream is keyed by (seed, purpose tag, index); draw i is
 * mix64(key + i*phi), so streams can be created per task in any order and
 * still produce identical values run to run. No global state.
 */
class Rng {
public:
    explicit Rng(std::uint64_t key) : key_(key) {}

    static Rng stream(std::uint64_t seed, std::string_view tag, std::uint64_t index = 0) {
        const std::uint64_t base = mix64(seed ^ fnv1a64(tag));
        return Rng(mix64(base + (index + 1) * kPhi));
    }

    Rng substream(std::string_view tag, std::uint64_t index = 0) const {
        return stream(key_, tag, index);
    }

    std::uint64_t next_u64() {
        counter_ += 1;
        return mix64(key_ + counter_ * kPhi);
    }

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + uniform() * (b - a); }

    bool bernoulli(double p) { return uniform() < p; }

    /// Uniform sign in {-1.0, +1.0}.
    double pick_sign() { return (next_u64() >> 63) ? 1.0 : -1.0; }

    /// Standard normal via Box-Muller; the second value of each pair is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    /// Unbiased integer in [0, n), n > 0.
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t x, r;
        do {
            x = next_u64();
            r = x % n;
        } while (x - r > std::uint64_t(0) - n);
        return r;
    }

    /// Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

private:
    static constexpr std::uint64_t kPhi = 0x9E3779B97F4A7C15ull;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace genlab
