// Counter-based random numbers (Philox4x32-10).
//
// Stateless: block(key, counter) is a pure function, so sample i of a run
// seeded with s is identical no matter how samples are distributed over
// threads.
#ifndef PAINLEVE_RNG_HPP
#define PAINLEVE_RNG_HPP

#include <array>
#include <cstdint>

namespace painleve::rng {

namespace detail {

inline void philox_round(std::array<std::uint32_t, 4>& c, std::uint32_t k0, std::uint32_t k1) {
    const std::uint64_t p0 = 0xD2511F53ULL * c[0];
    const std::uint64_t p1 = 0xCD9E8D57ULL * c[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
}

}  // namespace detail

// One 128-bit block of the Philox4x32-10 keyed permutation.
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                               std::uint32_t key0, std::uint32_t key1) {
    for (int round = 0; round < 10; ++round) {
        detail::philox_round(counter, key0, key1);
        key0 += 0x9E3779B9u;
        key1 += 0xBB67AE85u;
    }
    return counter;
}

// Two uniform doubles in [0, 1) with 53-bit resolution from (seed, index).
inline std::array<double, 2> uniform_pair(std::uint64_t seed, std::uint64_t index) {
    const std::array<std::uint32_t, 4> v = philox4x32(
        {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0u, 0u},
        static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32));
    const std::uint64_t a = (static_cast<std::uint64_t>(v[0]) << 32) | v[1];
    const std::uint64_t b = (static_cast<std::uint64_t>(v[2]) << 32) | v[3];
    return {static_cast<double>(a >> 11) * 0x1.0p-53, static_cast<double>(b >> 11) * 0x1.0p-53};
}

}  // namespace painleve::rng

#endif
