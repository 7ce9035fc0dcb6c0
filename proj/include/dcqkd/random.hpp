// Seeded random streams with cheap substream derivation.
//
// A stream is identified by its 64-bit seed. substream(i) derives a child
// stream from (seed, i) alone, independent of how much the parent has been
// consumed, so round i of a session draws the same values whether rounds run
// serially or in parallel.

#pragma once

#include <cstdint>
#include <random>

namespace dcqkd {

// Bijective 64-bit mixer (splitmix64 finalizer).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed)
        : seed_(seed), engine_(splitmix64(seed)) {}

    // Child stream keyed by (seed, index); does not touch this stream's state.
    RandomStream substream(std::uint64_t index) const {
        return RandomStream(splitmix64(seed_ ^ (0x9E3779B97F4A7C15ull * (index + 1))));
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // True with probability p. p = 0 never fires, p = 1 always fires.
    bool bernoulli(double p) { return uniform01() < p; }

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace dcqkd
