#pragma once

#include <cstdint>
#include <vector>

#include "nwlab/core/units.hpp"
#include "nwlab/nelson/ensemble.hpp"
#include "nwlab/schrodinger/polar.hpp"

namespace nwlab::nelson {

/// Full record of an Euler-Maruyama run: columns+1 snapshots of all
/// particle positions, column-major (column k is a contiguous block).
struct TrajectoryBatch {
    std::vector<double> positions;  // (steps+1) * n_particles
    std::size_t n_particles = 0;
    std::size_t columns = 0;  // steps + 1
    double dt = 0.0;
    double t0 = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t exit_count = 0;

    const double* column(std::size_t k) const { return positions.data() + k * n_particles; }
    double at(std::size_t k, std::size_t i) const { return positions[k * n_particles + i]; }

    /// Snapshot of the last column, with the counter offset advanced so
    /// chained runs keep drawing fresh noise.
    Ensemble final_ensemble() const;

private:
    friend TrajectoryBatch step_forward_sde(const Ensemble&, const schrodinger::VelocityFields&,
                                            const core::SimUnits&, double, std::size_t);
    std::uint64_t counter_offset0_ = 0;
};

/// Forward Nelson process x_{k+1} = x_k + c(x_k) dt + sqrt(2 D0 dt) xi
/// with drift c = v + u interpolated linearly between grid nodes
/// (masked nodes take the nearest unmasked value, clamped to ten times
/// the peak unmasked |c|). Particles leaving the grid are clamped and
/// counted; an exit fraction above 1% throws.
///
/// Stepping is parallel over fixed particle blocks with counter-based
/// noise, so the batch is bitwise reproducible for any thread count.
TrajectoryBatch step_forward_sde(const Ensemble& ensemble,
                                 const schrodinger::VelocityFields& drift,
                                 const core::SimUnits& units, double dt, std::size_t steps);

/// Drift table c = v + u as used by step_forward_sde (exposed for tests
/// and reporting).
std::vector<double> drift_table(const schrodinger::VelocityFields& drift);

}  // namespace nwlab::nelson
