#include "nwlab/nelson/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nwlab/simd/philox.hpp"

namespace nwlab::nelson {

Ensemble sample_density(const core::RealField& rho0, std::size_t n_particles,
                        std::uint64_t seed) {
    const auto& grid = rho0.grid;
    const std::size_t n = grid.n;
    const double dx = grid.dx();
    if (n_particles == 0) throw std::domain_error("sample_density: need at least one particle");

    double total = 0.0;
    for (double r : rho0.samples) {
        if (r < 0.0) throw std::domain_error("sample_density: negative density");
        total += r * dx;
    }
    if (std::abs(total - 1.0) > 1e-6)
        throw std::domain_error("sample_density: density must integrate to 1 within 1e-6");

    // Cumulative mass at cell edges; cell j spans [x_j - dx/2, x_j + dx/2).
    std::vector<double> cdf(n + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) cdf[j + 1] = cdf[j] + rho0[j] * dx;
    const double norm = cdf[n];

    Ensemble out;
    out.positions.resize(n_particles);
    out.seed = seed;
    for (std::size_t i = 0; i < n_particles; ++i) {
        const auto words =
            simd::Philox4x32::block(seed, static_cast<std::uint32_t>(simd::Stream::initial_sample),
                                    i, 0);
        const double target = simd::uniform_from_u32(words[0]) * norm;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
        std::size_t cell = it == cdf.begin() ? 0 : static_cast<std::size_t>(it - cdf.begin()) - 1;
        if (cell >= n) cell = n - 1;
        const double mass = cdf[cell + 1] - cdf[cell];
        const double frac = mass > 0.0 ? (target - cdf[cell]) / mass : 0.5;
        const double left = grid.x(cell) - 0.5 * dx;
        double x = left + frac * dx;
        x = std::clamp(x, grid.x(0), grid.x(n - 1));
        out.positions[i] = x;
    }
    return out;
}

core::RealField empirical_density(const Ensemble& ensemble, const core::SpatialGrid& grid) {
    core::RealField hist(grid);
    const double dx = grid.dx();
    const double inv_dx = 1.0 / dx;
    const auto n = static_cast<std::ptrdiff_t>(grid.n);
    for (double x : ensemble.positions) {
        auto j = static_cast<std::ptrdiff_t>(std::floor((x - grid.x_min) * inv_dx + 0.5));
        j = std::clamp<std::ptrdiff_t>(j, 0, n - 1);
        hist[static_cast<std::size_t>(j)] += 1.0;
    }
    const double scale = 1.0 / (static_cast<double>(ensemble.size()) * dx);
    for (double& v : hist.samples) v *= scale;
    return hist;
}

double l1_distance(const core::RealField& a, const core::RealField& b) {
    if (a.size() != b.size() || !(a.grid == b.grid))
        throw std::invalid_argument("l1_distance: grid mismatch");
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += std::abs(a[j] - b[j]);
    return s * a.grid.dx();
}

}  // namespace nwlab::nelson
