#ifndef YARDSIM_RNG_HPP
#define YARDSIM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace yardsim {

inline uint64_t splitmix64(uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Folds a tag sequence into one substream seed. Used to derive the
// independent streams (arrivals, per-vehicle draws, ...) from a run seed.
inline uint64_t mix_seed(std::initializer_list<uint64_t> tags) {
    uint64_t state = 0x8000000080001105ULL;
    for (uint64_t t : tags) {
        state ^= t + 0x9e3779b97f4a7c15ULL + (state << 6) + (state >> 2);
        (void)splitmix64(state);
    }
    return splitmix64(state);
}

// mt19937_64 with explicit double mappings so draws are reproducible
// independent of the standard library's distribution implementations.
class Rng {
  public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    uint64_t next_u64() { return gen_(); }

    // [0, 1)
    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    // Box-Muller, two uniforms per draw, no cached spare.
    double normal(double mean, double sd) {
        double u1 = 1.0 - uniform01();  // (0, 1]
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        return mean + sd * r * std::cos(2.0 * M_PI * u2);
    }

    // Inverse CDF; rate > 0.
    double exponential(double rate) {
        double u = uniform01();
        return -std::log1p(-u) / rate;
    }

    bool bernoulli(double p) { return uniform01() < p; }

  private:
    std::mt19937_64 gen_;
};

}  // namespace yardsim

#endif
