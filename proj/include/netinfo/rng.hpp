#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace netinfo {

// Counter-based 64-bit generator (splitmix64 finalizer over key ^ counter).
// Streams are derived by splitting on salts, so every consumer gets an
// independent, replayable sequence keyed by (purpose, node, time, ...)
// without shared state. Output is identical across platforms.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : key_(mix(seed ^ kGolden)) {}

    CounterRng split(std::uint64_t salt) const {
        return CounterRng(FromKey{}, mix(key_ ^ mix(salt + kGolden)));
    }

    std::uint64_t next_u64() { return mix(key_ + (++counter_) * kGolden); }

    // uniform in [0, 1) with 53 random bits
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in {0, ..., n-1}; n must be positive. Bias is O(n / 2^64).
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Dirichlet(1) point on the simplex via normalized exponentials.
    std::vector<double> next_simplex(std::size_t n) {
        std::vector<double> v(n);
        double sum = 0.0;
        for (double& x : v) {
            double u = next_unit();
            if (u <= 0.0) u = 0x1.0p-53;
            x = -std::log(u);
            sum += x;
        }
        for (double& x : v) x /= sum;
        return v;
    }

private:
    struct FromKey {};
    CounterRng(FromKey, std::uint64_t key) : key_(key) {}

    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace netinfo
