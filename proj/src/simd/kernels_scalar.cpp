#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>

#include "nwlab/simd/kernels.hpp"
#include "nwlab/simd/philox.hpp"
#include "nwlab/simd/vecmath.hpp"

namespace nwlab::simd {

namespace detail {

void gaussian_fill_scalar(std::uint64_t seed, std::uint32_t stream, std::uint64_t particle0,
                          std::uint64_t step, double* out, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
        const auto r = Philox4x32::block(seed, stream, particle0 + i, step);
        out[i] = normal_from_words(r[0], r[1]);
    }
}

void em_step_scalar(double* x, std::size_t count, const DriftTable& drift, double dt,
                    double noise_scale, const double* noise, double x_lo, double x_hi,
                    std::uint64_t* exit_count) {
    const double nm1 = static_cast<double>(drift.n - 1);
    const double nm2 = static_cast<double>(drift.n - 2);
    std::uint64_t exits = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const double xi = x[i];
        double f = (xi - drift.x0) * drift.inv_dx;
        f = std::max(f, 0.0);
        f = std::min(f, nm1);
        const double fj = std::min(std::floor(f), nm2);
        const auto j = static_cast<std::size_t>(fj);
        const double t = f - fj;
        const double dlo = drift.values[j];
        const double dhi = drift.values[j + 1];
        const double diff = dhi - dlo;
        const double c = dlo + t * diff;
        const double adv = c * dt;
        const double moved = xi + adv;
        const double kick = noise_scale * noise[i];
        const double xn = moved + kick;
        exits += (xn < x_lo) | (xn > x_hi);
        const double clamped = std::min(std::max(xn, x_lo), x_hi);
        x[i] = clamped;
    }
    *exit_count += exits;
}

}  // namespace detail

const KernelBackend& scalar_backend() {
    static const KernelBackend backend{"scalar", &detail::gaussian_fill_scalar,
                                       &detail::em_step_scalar};
    return backend;
}

}  // namespace nwlab::simd
