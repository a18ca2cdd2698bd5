#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace nwlab::simd {

/// Linear-interpolation table for a drift field on a uniform grid.
/// Positions are assumed clamped to [x_lo, x_hi] which must lie inside
/// the node range.
struct DriftTable {
    const double* values = nullptr;
    std::size_t n = 0;
    double x0 = 0.0;
    double inv_dx = 0.0;
};

/// One Euler-Maruyama step over a contiguous block of particles:
///   x <- clamp(x + c(x) dt + noise_scale * xi, x_lo, x_hi)
/// Returns the number of clamped (exited) particles via exit_count.
using EmStepFn = void (*)(double* x, std::size_t count, const DriftTable& drift, double dt,
                          double noise_scale, const double* noise, double x_lo, double x_hi,
                          std::uint64_t* exit_count);

/// One standard normal per particle index [particle0, particle0+count)
/// at a fixed step index, from the counter-based stream.
using GaussianFillFn = void (*)(std::uint64_t seed, std::uint32_t stream,
                                std::uint64_t particle0, std::uint64_t step, double* out,
                                std::size_t count);

struct KernelBackend {
    const char* name;
    GaussianFillFn gaussian_fill;
    EmStepFn em_step;
};

/// Reference implementation; always available.
const KernelBackend& scalar_backend();

/// AVX2 implementation, or nullptr when the binary/CPU lacks it.
const KernelBackend* avx2_backend();

/// Backend chosen at startup (AVX2 when the CPU supports it, unless the
/// NWLAB_KERNELS environment variable or set_active_backend says
/// otherwise). Both produce bitwise-identical results by construction;
/// the equivalence suite enforces that.
const KernelBackend& active_backend();

/// Select "scalar", "avx2" or "auto". Returns false if unavailable.
bool set_active_backend(std::string_view name);

/// Worker-thread count used by the ensemble stepping loops (results do
/// not depend on it; see the determinism tests).
void set_threads(unsigned n);
unsigned threads();

}  // namespace nwlab::simd
