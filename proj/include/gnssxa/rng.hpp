#ifndef GNSSXA_RNG_HPP
#define GNSSXA_RNG_HPP

#include <cstdint>
#include <random>

namespace gnssxa {

/// splitmix64 step, used to whiten seeds and derive independent substreams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seedable 64-bit generator. Substreams derived from (seed, stream ids) are
/// statistically independent, so parallel Monte Carlo trials never share state.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(whiten(seed)) {}

    /// Substream for e.g. (seed, epoch, repetition): replayable in isolation.
    static Rng substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
        std::uint64_t s = seed;
        std::uint64_t x = splitmix64(s);
        s ^= a * 0xd6e8feb86659fd93ULL;
        x ^= splitmix64(s);
        s ^= b * 0xc2b2ae3d27d4eb4fULL;
        x ^= splitmix64(s);
        return Rng(x);
    }

    double normal(double mean = 0.0, double stddev = 1.0) {
        std::normal_distribution<double> d(mean, stddev);
        return d(engine_);
    }

    double uniform(double lo, double hi) {
        std::uniform_real_distribution<double> d(lo, hi);
        return d(engine_);
    }

    std::uint64_t next_u64() { return engine_(); }

    std::mt19937_64& engine() { return engine_; }

private:
    static std::uint64_t whiten(std::uint64_t seed) {
        std::uint64_t s = seed;
        return splitmix64(s);
    }

    std::mt19937_64 engine_;
};

}  // namespace gnssxa

#endif
