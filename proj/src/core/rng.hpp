#ifndef CODEDLAB_CORE_RNG_HPP
#define CODEDLAB_CORE_RNG_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>
#include <vector>

#include "core/error.hpp"

namespace codedlab {

// Counter-based generator: output i is a SplitMix64-style hash of
// (key, counter), so streams are stateless apart from the counter and any
// (seed, substream name, index) triple always reproduces the same sequence.
class Rng {
  public:
    using result_type = uint64_t;

    explicit Rng(uint64_t key) : key_(key) {}

    static Rng from_seed(uint64_t seed) { return Rng(mix(seed ^ 0x1905f79bULL)); }

    // Derives an independent named stream; `index` separates instances that
    // share a name (per-server, per-trial, ...).
    Rng substream(std::string_view name, uint64_t index = 0) const {
        uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a over the name
        for (char c : name) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ULL;
        }
        return Rng(mix(mix(key_ ^ h) + index * 0x9e3779b97f4a7c15ULL));
    }

    uint64_t next_u64() { return mix(key_ + ++counter_ * 0x9e3779b97f4a7c15ULL); }

    static constexpr uint64_t min() { return 0; }
    static constexpr uint64_t max() { return ~0ULL; }
    uint64_t operator()() { return next_u64(); }

    // Uniform on [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1]; safe as a log() argument.
    double next_double_open() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

    double next_normal() {
        const double u = next_double_open();
        const double v = next_double();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
    }

    double next_exponential(double rate) {
        require(rate > 0.0, ErrorKind::InvalidParameter, "exponential rate must be positive");
        return -std::log(next_double_open()) / rate;
    }

    int next_sign() { return (next_u64() & 1) ? 1 : -1; }

    size_t next_index(size_t n) {
        require(n > 0, ErrorKind::InvalidParameter, "next_index needs n > 0");
        // Rejection sampling keeps the draw exactly uniform.
        const uint64_t span = ~0ULL - (~0ULL % n);
        uint64_t x = next_u64();
        while (x >= span) x = next_u64();
        return static_cast<size_t>(x % n);
    }

    // Inverse-CDF draw from a normalized probability vector; zero-probability
    // atoms are never returned.
    size_t next_categorical(const std::vector<double>& probs) {
        const double u = next_double();
        double cum = 0.0;
        size_t last_nonzero = probs.size();
        for (size_t i = 0; i < probs.size(); ++i) {
            if (probs[i] <= 0.0) continue;
            last_nonzero = i;
            cum += probs[i];
            if (u < cum) return i;
        }
        require(last_nonzero < probs.size(), ErrorKind::DegenerateDistribution,
                "categorical draw from an all-zero distribution");
        return last_nonzero;  // guards against cum < 1 from rounding
    }

    // Uniform k-subset of {0,...,n-1} without replacement, ascending order.
    std::vector<size_t> next_subset(size_t n, size_t k);

  private:
    static uint64_t mix(uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    uint64_t key_ = 0;
    uint64_t counter_ = 0;
};

inline std::vector<size_t> Rng::next_subset(size_t n, size_t k) {
    require(k <= n, ErrorKind::InvalidParameter, "subset size exceeds ground set");
    std::vector<size_t> pool(n);
    for (size_t i = 0; i < n; ++i) pool[i] = i;
    for (size_t i = 0; i < k; ++i) {
        const size_t j = i + next_index(n - i);
        std::swap(pool[i], pool[j]);
    }
    std::vector<size_t> out(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace codedlab

#endif
