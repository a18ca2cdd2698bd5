#include "nwlab/schrodinger/polar.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nwlab::schrodinger {

namespace {
constexpr double kLogFloor = 1e-300;  // keeps the log finite at exact nodes

double wrap_to_pi(double a) {
    constexpr double pi = std::numbers::pi;
    while (a > pi) a -= 2.0 * pi;
    while (a <= -pi) a += 2.0 * pi;
    return a;
}
}  // namespace

PolarFields polar_decompose(const WaveFunction& psi, double node_threshold) {
    const auto& grid = psi.grid();
    const std::size_t n = grid.n;

    core::RealField rho(grid);
    double rho_max = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        rho[j] = std::norm(psi.field[j]);
        rho_max = std::max(rho_max, rho[j]);
    }
    const double threshold = node_threshold < 0.0 ? 1e-8 * rho_max : node_threshold;

    PolarFields out;
    out.r = core::RealField(grid);
    out.s = core::RealField(grid);
    out.node_mask.assign(n, 0);
    out.threshold_used = threshold;

    std::size_t unmasked = 0;
    for (std::size_t j = 0; j < n; ++j) {
        out.r[j] = 0.5 * std::log(rho[j] + kLogFloor);
        if (rho[j] < threshold)
            out.node_mask[j] = 1;
        else
            ++unmasked;
    }
    if (unmasked == 0)
        throw std::domain_error("polar_decompose: entire field below node threshold");

    // Unwrap per contiguous unmasked segment.
    std::size_t j = 0;
    while (j < n) {
        if (out.node_mask[j]) {
            out.s[j] = 0.0;
            ++j;
            continue;
        }
        std::size_t end = j;
        while (end < n && !out.node_mask[end]) ++end;
        out.s[j] = std::arg(psi.field[j]);
        for (std::size_t i = j + 1; i < end; ++i) {
            const double raw = std::arg(psi.field[i]);
            const double prev_raw = std::arg(psi.field[i - 1]);
            out.s[i] = out.s[i - 1] + wrap_to_pi(raw - prev_raw);
        }
        j = end;
    }
    return out;
}

VelocityFields drift_fields(const PolarFields& polar, const core::SimUnits& units) {
    const auto& grid = polar.r.grid;
    const std::size_t n = grid.n;
    const double d0 = units.d0();
    const double inv_dx = 1.0 / grid.dx();

    VelocityFields out;
    out.v = core::RealField(grid);
    out.u = core::RealField(grid);
    out.node_mask = polar.node_mask;

    auto grad_at = [&](const core::RealField& f, std::size_t j, std::size_t lo,
                       std::size_t hi) -> double {
        // [lo, hi] is the unmasked segment containing j; second-order
        // one-sided stencils at the segment ends where possible.
        if (j > lo && j < hi) return (f[j + 1] - f[j - 1]) * 0.5 * inv_dx;
        if (j == lo) {
            if (hi - lo >= 2)
                return (-3.0 * f[j] + 4.0 * f[j + 1] - f[j + 2]) * 0.5 * inv_dx;
            return (f[j + 1] - f[j]) * inv_dx;
        }
        if (hi - lo >= 2)
            return (3.0 * f[j] - 4.0 * f[j - 1] + f[j - 2]) * 0.5 * inv_dx;
        return (f[j] - f[j - 1]) * inv_dx;
    };

    std::size_t j = 0;
    while (j < n) {
        if (polar.masked(j)) {
            ++j;
            continue;
        }
        std::size_t end = j;
        while (end < n && !polar.masked(end)) ++end;
        const std::size_t lo = j;
        const std::size_t hi = end - 1;
        if (lo == hi) {
            out.node_mask[lo] = 1;  // cannot differentiate a single point
            j = end;
            continue;
        }
        for (std::size_t i = lo; i <= hi; ++i) {
            out.v[i] = 2.0 * d0 * grad_at(polar.s, i, lo, hi);
            out.u[i] = 2.0 * d0 * grad_at(polar.r, i, lo, hi);
        }
        j = end;
    }
    return out;
}

}  // namespace nwlab::schrodinger
