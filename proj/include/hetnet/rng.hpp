#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hetnet {

/// Seeded random source with hand-rolled transforms so that streams are
/// bit-identical across platforms and standard libraries.  Every stochastic
/// piece of the simulator (placement, shadowing, fading, renewable draws)
/// goes through this class; regenerating with the same seed reproduces the
/// exact same scenario.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on the open interval (0, 1).
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Box-Muller without caching; consumes exactly two uniforms per draw.
    double normal(double mean, double stddev) {
        const double u1 = uniform();
        const double u2 = uniform();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * mag * std::cos(2.0 * M_PI * u2);
    }

    /// Unit-mean exponential, used for Rayleigh fading power |a|^2.
    double exponential() { return -std::log(uniform()); }

  private:
    std::mt19937_64 engine_;
};

/// SplitMix64 step; used to derive independent sub-seeds (per trial, per
/// sweep point, per subsystem) from one master seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace hetnet
