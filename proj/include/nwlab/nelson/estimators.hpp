#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "nwlab/core/grid.hpp"
#include "nwlab/nelson/sde.hpp"

namespace nwlab::nelson {

/// Position-binned conditional estimates. Bins are grid cells centred on
/// the nodes; bins with fewer than min_count samples are flagged invalid
/// rather than zeroed.
struct BinnedField {
    std::vector<double> centers;
    std::vector<double> values;
    std::vector<std::uint64_t> counts;
    std::vector<std::uint8_t> valid;

    static constexpr std::uint64_t min_count = 50;
    std::size_t size() const { return centers.size(); }
};

/// Forward finite-difference drift estimate: bins particles by position
/// at column k and averages (x_{k+lag} - x_k)/(lag dt), pooled over all
/// valid k. This realises the conditional mean of the forward derivative
/// at time scale lag*dt.
BinnedField estimate_forward_drift(const TrajectoryBatch& batch, const core::SpatialGrid& grid,
                                   std::size_t lag);

/// Backward counterpart: (x_k - x_{k-lag})/(lag dt), binned by position
/// at column k.
BinnedField estimate_backward_drift(const TrajectoryBatch& batch, const core::SpatialGrid& grid,
                                    std::size_t lag);

/// Pooled diffusion-coefficient estimate: second moment of the lag
/// displacement over 2*lag*dt, drift-corrected by subtracting the
/// squared binned mean displacement.
double estimate_diffusion(const TrajectoryBatch& batch, std::size_t lag);

/// v = (c + c*)/2, u = (c - c*)/2 elementwise; invalid bins propagate.
std::pair<BinnedField, BinnedField> decompose_velocities(const BinnedField& c,
                                                         const BinnedField& c_star);

/// Mean accumulated quadratic variation sum (x_{k+1}-x_k)^2 over windows
/// of `window_steps` consecutive steps (the fluctuation variance at that
/// time scale).
double mean_quadratic_variation(const TrajectoryBatch& batch, std::size_t window_steps);

}  // namespace nwlab::nelson
