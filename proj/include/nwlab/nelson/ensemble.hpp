#pragma once

#include <cstdint>
#include <vector>

#include "nwlab/core/field.hpp"
#include "nwlab/core/grid.hpp"

namespace nwlab::nelson {

/// Particle positions at a common time. counter_offset is the step index
/// the next SDE stage starts drawing noise from, so chained stepping
/// never reuses a (particle, step) counter.
struct Ensemble {
    std::vector<double> positions;
    double time = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t counter_offset = 0;

    std::size_t size() const { return positions.size(); }
};

/// Inverse-CDF sampling from the piecewise-linear CDF of rho0 (each grid
/// node carries mass rho0[j]*dx over the cell [x_j - dx/2, x_j + dx/2)).
/// Deterministic in (seed, particle index). Requires rho0 >= 0 with unit
/// integral within 1e-6.
Ensemble sample_density(const core::RealField& rho0, std::size_t n_particles,
                        std::uint64_t seed);

/// Cell histogram on the grid (cells centred on nodes), normalised to
/// integrate to 1.
core::RealField empirical_density(const Ensemble& ensemble, const core::SpatialGrid& grid);

/// Integral of |a - b| dx; the standard density-tracking metric here.
double l1_distance(const core::RealField& a, const core::RealField& b);

}  // namespace nwlab::nelson
