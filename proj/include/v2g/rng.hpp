#pragma once

#include <cstdint>
#include <random>

namespace v2g {

// Deterministic uniform stream with an explicit bit->double mapping, so that
// sequences are identical across platforms and standard-library versions
// (std::uniform_real_distribution makes no such guarantee).
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : eng_(seed) {}

    // uniform double in [0, 1), 53 random bits
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // one draw, true with probability p
    bool bernoulli(double p) { return uniform() < p; }

    // one draw, integer in [0, n)
    int below(int n) {
        int k = static_cast<int>(uniform() * n);
        return k < n ? k : n - 1;
    }

    std::uint64_t raw() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

// SplitMix64 finalizer; used to derive independent stream seeds from a base
// seed and a stream id without correlated low bits.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream_id) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream_id + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace v2g
