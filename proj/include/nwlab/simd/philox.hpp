#pragma once

#include <array>
#include <cstdint>

namespace nwlab::simd {

/// Philox4x32-10 counter-based generator. A draw is a pure function of
/// (seed, stream, particle, step), which is what makes ensembles
/// reproducible under any particle partitioning.
struct Philox4x32 {
    static constexpr std::uint32_t mul0 = 0xD2511F53u;
    static constexpr std::uint32_t mul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t weyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t weyl1 = 0xBB67AE85u;

    static std::array<std::uint32_t, 4> block(std::uint64_t seed, std::uint32_t stream,
                                              std::uint64_t particle, std::uint64_t step) {
        std::uint32_t c0 = static_cast<std::uint32_t>(step);
        std::uint32_t c1 = static_cast<std::uint32_t>(step >> 32);
        std::uint32_t c2 = static_cast<std::uint32_t>(particle);
        std::uint32_t c3 = static_cast<std::uint32_t>(particle >> 32);
        std::uint32_t k0 = static_cast<std::uint32_t>(seed);
        std::uint32_t k1 = static_cast<std::uint32_t>(seed >> 32) + stream * 0x85EBCA6Bu;
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(mul0) * c0;
            const std::uint64_t p1 = static_cast<std::uint64_t>(mul1) * c2;
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            const std::uint32_t n0 = hi1 ^ c1 ^ k0;
            const std::uint32_t n1 = lo1;
            const std::uint32_t n2 = hi0 ^ c3 ^ k1;
            const std::uint32_t n3 = lo0;
            c0 = n0;
            c1 = n1;
            c2 = n2;
            c3 = n3;
            k0 += weyl0;
            k1 += weyl1;
        }
        return {c0, c1, c2, c3};
    }
};

/// Uniform in (0,1): (word + 1/2) * 2^-32, never exactly 0 or 1.
inline double uniform_from_u32(std::uint32_t w) {
    return (static_cast<double>(w) + 0.5) * 0x1p-32;
}

/// RNG stream ids; keeping them distinct keeps draw domains disjoint.
enum class Stream : std::uint32_t {
    initial_sample = 0,
    sde_noise = 1,
};

}  // namespace nwlab::simd
