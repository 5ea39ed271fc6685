#include "doctest.h"

#include <cstdint>
#include <random>
#include <vector>

#include "v2g/rng.hpp"

using namespace v2g;

TEST_CASE("uniform applies the documented bit mapping to mt19937_64 output") {
    // The engine itself is fully specified by the standard, so the stream is
    // reproducible across platforms; the mapping takes the top 53 bits.
    std::mt19937_64 eng(12345);
    RngStream rng(12345);
    for (int i = 0; i < 100; ++i) {
        const double expected = static_cast<double>(eng() >> 11) * 0x1.0p-53;
        CHECK(rng.uniform() == expected);
    }
}

TEST_CASE("standard-mandated mt19937_64 checkpoint holds") {
    // The C++ standard pins the 10000th output of the default-seeded engine;
    // if this fails the platform's engine is nonconforming and every frozen
    // trajectory in this suite is suspect.
    std::mt19937_64 eng;
    for (int i = 0; i < 9999; ++i) eng();
    CHECK(eng() == 9981545732273789042ULL);
}

TEST_CASE("uniform stays in [0,1) and below stays in range") {
    RngStream rng(7);
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    RngStream rng2(8);
    for (int i = 0; i < 10000; ++i) {
        const int k = rng2.below(6);
        CHECK(k >= 0);
        CHECK(k < 6);
    }
}

TEST_CASE("bernoulli endpoints are deterministic") {
    RngStream rng(3);
    for (int i = 0; i < 1000; ++i) CHECK_FALSE(rng.bernoulli(0.0));
    for (int i = 0; i < 1000; ++i) CHECK(rng.bernoulli(1.0));
}

TEST_CASE("below is close to uniform over residues") {
    RngStream rng(99);
    const int n = 120000;
    std::vector<int> counts(6, 0);
    for (int i = 0; i < n; ++i) ++counts[rng.below(6)];
    // 5 sigma for a fair die at this n is ~0.0054
    for (int c : counts) CHECK(std::abs(c / double(n) - 1.0 / 6.0) < 0.006);
}

TEST_CASE("same seed reproduces the stream, different streams differ") {
    RngStream a(42), b(42), c(43);
    bool all_equal_c = true;
    for (int i = 0; i < 50; ++i) {
        const double ua = a.uniform();
        CHECK(ua == b.uniform());
        if (ua != c.uniform()) all_equal_c = false;
    }
    CHECK_FALSE(all_equal_c);
}

TEST_CASE("mix_seed matches the reference splitmix64 sequence") {
    // mix_seed(seed, k) is output k+1 of splitmix64 started at state `seed`;
    // the first outputs from state 0 are published reference vectors.
    CHECK(mix_seed(0, 0) == 0xE220A8397B1DCDAFULL);
    CHECK(mix_seed(0, 1) == 0x6E789E6AA1B965F4ULL);
    CHECK(mix_seed(0, 2) == 0x06C45D188009454FULL);
}

TEST_CASE("mix_seed separates nearby seeds and stream ids") {
    // Consecutive seeds and ids must land far apart so derived streams do not
    // overlap; finalized splitmix64 guarantees avalanche on every input bit.
    CHECK(mix_seed(42, 1) != mix_seed(42, 2));
    CHECK(mix_seed(42, 1) != mix_seed(43, 1));
    RngStream a(mix_seed(42, 1)), b(mix_seed(42, 2));
    int agree = 0;
    for (int i = 0; i < 1000; ++i)
        if (a.below(6) == b.below(6)) ++agree;
    CHECK(agree < 300); // ~1/6 expected if independent
}
