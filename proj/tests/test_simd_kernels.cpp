#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <vector>

#include "nwlab/simd/kernels.hpp"
#include "nwlab/simd/philox.hpp"
#include "nwlab/simd/vecmath.hpp"
#include "test_helpers.hpp"

using namespace nwlab;

TEST_CASE("philox blocks are deterministic and stream-separated") {
    const auto a = simd::Philox4x32::block(42, 1, 7, 3);
    const auto b = simd::Philox4x32::block(42, 1, 7, 3);
    CHECK(a == b);
    const auto c = simd::Philox4x32::block(42, 0, 7, 3);
    CHECK(a != c);
    const auto d = simd::Philox4x32::block(43, 1, 7, 3);
    CHECK(a != d);
    const auto e = simd::Philox4x32::block(42, 1, 8, 3);
    CHECK(a != e);
    const auto f = simd::Philox4x32::block(42, 1, 7, 4);
    CHECK(a != f);
}

TEST_CASE("uniform_from_u32 stays strictly inside (0,1)") {
    CHECK(simd::uniform_from_u32(0u) > 0.0);
    CHECK(simd::uniform_from_u32(0xFFFFFFFFu) < 1.0);
    CHECK(simd::uniform_from_u32(0x80000000u) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("portable_log matches std::log to a few 1e-16 relative") {
    double worst = 0.0;
    for (std::size_t i = 0; i < 20000; ++i) {
        const auto w = simd::Philox4x32::block(7, 0, i, 0);
        const double u = simd::uniform_from_u32(w[0]);
        const double mine = simd::portable_log(u);
        const double ref = std::log(u);
        worst = std::max(worst, std::abs(mine - ref) / std::abs(ref));
    }
    CHECK(worst < 5e-15);
}

TEST_CASE("portable_cos_2pi matches std::cos on [0,1)") {
    double worst = 0.0;
    for (std::size_t i = 0; i < 20000; ++i) {
        const auto w = simd::Philox4x32::block(9, 0, i, 0);
        const double u = simd::uniform_from_u32(w[0]);
        const double mine = simd::portable_cos_2pi(u);
        const double ref = std::cos(2.0 * oracle::pi * u);
        worst = std::max(worst, std::abs(mine - ref));
    }
    CHECK(worst < 5e-15);
    // quadrant boundaries
    CHECK(simd::portable_cos_2pi(0.0) == 1.0);
    CHECK(std::abs(simd::portable_cos_2pi(0.25)) < 1e-15);
    CHECK(simd::portable_cos_2pi(0.5) == -1.0);
    CHECK(std::abs(simd::portable_cos_2pi(0.75)) < 1e-15);
}

TEST_CASE("gaussian_fill draws have unit-normal moments") {
    const std::size_t n = 200000;
    std::vector<double> z(n);
    simd::scalar_backend().gaussian_fill(2024, 1, 0, 0, z.data(), n);
    const auto m = oracle::moments(z);
    CHECK(std::abs(m.mean) < 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(m.var == doctest::Approx(1.0).epsilon(0.02));
    // fourth moment of a standard normal is 3
    double m4 = 0.0;
    for (double v : z) m4 += v * v * v * v;
    m4 /= static_cast<double>(n);
    CHECK(m4 == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("scalar and AVX2 backends agree bitwise") {
    const simd::KernelBackend* avx2 = simd::avx2_backend();
    if (avx2 == nullptr) {
        MESSAGE("AVX2 unavailable on this host; scalar backend is the only variant");
        return;
    }

    SUBCASE("gaussian_fill") {
        const std::size_t n = 1003;  // deliberately not a multiple of 4
        std::vector<double> a(n);
        std::vector<double> b(n);
        simd::scalar_backend().gaussian_fill(99, 1, 17, 5, a.data(), n);
        avx2->gaussian_fill(99, 1, 17, 5, b.data(), n);
        CHECK(std::memcmp(a.data(), b.data(), n * sizeof(double)) == 0);
    }

    SUBCASE("em_step") {
        const std::size_t n_grid = 64;
        std::vector<double> table(n_grid);
        for (std::size_t j = 0; j < n_grid; ++j)
            table[j] = std::sin(0.37 * static_cast<double>(j)) * 1.5;
        const simd::DriftTable drift{table.data(), n_grid, -4.0, 1.0 / 0.126984126984127};

        const std::size_t n = 777;
        std::vector<double> xa(n);
        std::vector<double> noise(n);
        simd::scalar_backend().gaussian_fill(5, 1, 0, 0, xa.data(), n);
        for (double& v : xa) v = std::fmod(v, 3.9);  // positions inside the grid
        simd::scalar_backend().gaussian_fill(5, 1, 0, 1, noise.data(), n);
        std::vector<double> xb = xa;

        std::uint64_t exits_a = 0;
        std::uint64_t exits_b = 0;
        simd::scalar_backend().em_step(xa.data(), n, drift, 0.01, 0.1, noise.data(), -4.0,
                                       3.873015873015873, &exits_a);
        avx2->em_step(xb.data(), n, drift, 0.01, 0.1, noise.data(), -4.0, 3.873015873015873,
                      &exits_b);
        CHECK(exits_a == exits_b);
        CHECK(std::memcmp(xa.data(), xb.data(), n * sizeof(double)) == 0);
    }
}

TEST_CASE("backend equivalence holds across a parameter sweep") {
    const simd::KernelBackend* avx2 = simd::avx2_backend();
    if (avx2 == nullptr) {
        MESSAGE("AVX2 unavailable on this host; scalar backend is the only variant");
        return;
    }
    for (std::uint64_t seed : {1ull, 0xFFFFFFFFFFFFFFFFull, 987654321ull}) {
        for (std::size_t count : {1ull, 4ull, 5ull, 127ull, 1024ull}) {
            for (std::uint64_t step : {0ull, 7ull, 1ull << 40}) {
                std::vector<double> a(count);
                std::vector<double> b(count);
                simd::scalar_backend().gaussian_fill(seed, 1, 123456789ull, step, a.data(),
                                                     count);
                avx2->gaussian_fill(seed, 1, 123456789ull, step, b.data(), count);
                REQUIRE(std::memcmp(a.data(), b.data(), count * sizeof(double)) == 0);
            }
        }
    }
}

TEST_CASE("backend selection honours explicit requests") {
    CHECK(simd::set_active_backend("scalar"));
    CHECK(std::string(simd::active_backend().name) == "scalar");
    CHECK_FALSE(simd::set_active_backend("neon"));
    CHECK(simd::set_active_backend("auto"));
    if (simd::avx2_backend() != nullptr)
        CHECK(std::string(simd::active_backend().name) == "avx2");
}
