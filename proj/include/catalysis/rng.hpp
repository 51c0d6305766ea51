#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace catalysis {

// Seedable random source used everywhere randomness is required.
//
// The engine is std::mt19937_64 (its output sequence is fixed by the
// standard), and all distributions are implemented here by hand instead of
// going through <random>'s distribution classes, whose output is
// implementation-defined. Same seed => same stream on every platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Unbiased integer in [0, n), n > 0. Rejection on the top of the range.
    std::uint64_t uniform_index(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % n;
    }

    // Standard normal via Marsaglia's polar method (spare value cached).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

    bool bernoulli(double p) { return uniform() < p; }

    // splitmix64 step; used to derive independent stream seeds.
    static std::uint64_t splitmix64(std::uint64_t& state) {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Decorrelated seed for stream `index` of a run seeded with `seed`.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
        std::uint64_t s = seed;
        std::uint64_t a = splitmix64(s);
        s = seed ^ (0x6a09e667f3bcc909ULL + index * 0x3c6ef372fe94f82aULL);
        std::uint64_t b = splitmix64(s);
        return a ^ (b + index);
    }

  private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace catalysis
