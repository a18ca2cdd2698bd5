#include "nwlab/nelson/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nwlab::nelson {

namespace {

std::size_t bin_index(double x, const core::SpatialGrid& grid) {
    const auto n = static_cast<std::ptrdiff_t>(grid.n);
    auto j = static_cast<std::ptrdiff_t>(std::floor((x - grid.x_min) / grid.dx() + 0.5));
    j = std::clamp<std::ptrdiff_t>(j, 0, n - 1);
    return static_cast<std::size_t>(j);
}

BinnedField finish(const core::SpatialGrid& grid, std::vector<double> sums,
                   std::vector<std::uint64_t> counts) {
    BinnedField out;
    out.centers = grid.points();
    out.values.assign(grid.n, 0.0);
    out.counts = std::move(counts);
    out.valid.assign(grid.n, 0);
    bool any_valid = false;
    for (std::size_t j = 0; j < grid.n; ++j) {
        if (out.counts[j] >= BinnedField::min_count) {
            out.values[j] = sums[j] / static_cast<double>(out.counts[j]);
            out.valid[j] = 1;
            any_valid = true;
        }
    }
    if (!any_valid)
        throw std::runtime_error("drift estimator: no bin reached the minimum sample count");
    return out;
}

}  // namespace

BinnedField estimate_forward_drift(const TrajectoryBatch& batch, const core::SpatialGrid& grid,
                                   std::size_t lag) {
    if (lag < 1) throw std::domain_error("estimate_forward_drift: lag must be >= 1");
    if (batch.columns < lag + 1)
        throw std::domain_error("estimate_forward_drift: batch shorter than lag");
    std::vector<double> sums(grid.n, 0.0);
    std::vector<std::uint64_t> counts(grid.n, 0);
    const double inv_tau = 1.0 / (static_cast<double>(lag) * batch.dt);
    for (std::size_t k = 0; k + lag < batch.columns; ++k) {
        const double* now = batch.column(k);
        const double* later = batch.column(k + lag);
        for (std::size_t i = 0; i < batch.n_particles; ++i) {
            const std::size_t b = bin_index(now[i], grid);
            sums[b] += (later[i] - now[i]) * inv_tau;
            ++counts[b];
        }
    }
    return finish(grid, std::move(sums), std::move(counts));
}

BinnedField estimate_backward_drift(const TrajectoryBatch& batch, const core::SpatialGrid& grid,
                                    std::size_t lag) {
    if (lag < 1) throw std::domain_error("estimate_backward_drift: lag must be >= 1");
    if (batch.columns < lag + 1)
        throw std::domain_error("estimate_backward_drift: batch shorter than lag");
    std::vector<double> sums(grid.n, 0.0);
    std::vector<std::uint64_t> counts(grid.n, 0);
    const double inv_tau = 1.0 / (static_cast<double>(lag) * batch.dt);
    for (std::size_t k = lag; k < batch.columns; ++k) {
        const double* now = batch.column(k);
        const double* earlier = batch.column(k - lag);
        for (std::size_t i = 0; i < batch.n_particles; ++i) {
            const std::size_t b = bin_index(now[i], grid);
            sums[b] += (now[i] - earlier[i]) * inv_tau;
            ++counts[b];
        }
    }
    return finish(grid, std::move(sums), std::move(counts));
}

double estimate_diffusion(const TrajectoryBatch& batch, std::size_t lag) {
    if (lag < 1) throw std::domain_error("estimate_diffusion: lag must be >= 1");
    if (batch.columns < lag + 1)
        throw std::domain_error("estimate_diffusion: batch shorter than lag");

    // Internal binning over the sampled position range (the signature
    // carries no grid); 128 bins is plenty for the drift correction.
    constexpr std::size_t n_bins = 128;
    double lo = batch.positions.front();
    double hi = lo;
    for (double x : batch.positions) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    const double width = hi > lo ? (hi - lo) : 1.0;
    const double inv_w = static_cast<double>(n_bins) / width;

    std::vector<double> disp_sum(n_bins, 0.0);
    std::vector<std::uint64_t> counts(n_bins, 0);
    double sq_sum = 0.0;
    std::uint64_t total = 0;
    for (std::size_t k = 0; k + lag < batch.columns; ++k) {
        const double* now = batch.column(k);
        const double* later = batch.column(k + lag);
        for (std::size_t i = 0; i < batch.n_particles; ++i) {
            const double d = later[i] - now[i];
            auto b = static_cast<std::size_t>((now[i] - lo) * inv_w);
            if (b >= n_bins) b = n_bins - 1;
            disp_sum[b] += d;
            ++counts[b];
            sq_sum += d * d;
            ++total;
        }
    }
    double mean_sq = 0.0;
    for (std::size_t b = 0; b < n_bins; ++b)
        if (counts[b] > 0) mean_sq += disp_sum[b] * disp_sum[b] / static_cast<double>(counts[b]);
    const double tau = static_cast<double>(lag) * batch.dt;
    return (sq_sum - mean_sq) / (2.0 * tau * static_cast<double>(total));
}

std::pair<BinnedField, BinnedField> decompose_velocities(const BinnedField& c,
                                                         const BinnedField& c_star) {
    if (c.size() != c_star.size() || c.centers != c_star.centers)
        throw std::invalid_argument("decompose_velocities: bin mismatch");
    BinnedField v;
    BinnedField u;
    v.centers = u.centers = c.centers;
    const std::size_t n = c.size();
    v.values.assign(n, 0.0);
    u.values.assign(n, 0.0);
    v.counts.assign(n, 0);
    u.counts.assign(n, 0);
    v.valid.assign(n, 0);
    u.valid.assign(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
        const bool ok = c.valid[j] && c_star.valid[j];
        v.valid[j] = u.valid[j] = ok ? 1 : 0;
        v.counts[j] = u.counts[j] = std::min(c.counts[j], c_star.counts[j]);
        if (ok) {
            v.values[j] = 0.5 * (c.values[j] + c_star.values[j]);
            u.values[j] = 0.5 * (c.values[j] - c_star.values[j]);
        }
    }
    return {std::move(v), std::move(u)};
}

double mean_quadratic_variation(const TrajectoryBatch& batch, std::size_t window_steps) {
    if (window_steps < 1 || batch.columns < window_steps + 1)
        throw std::domain_error("mean_quadratic_variation: window longer than batch");
    double acc = 0.0;
    std::uint64_t windows = 0;
    for (std::size_t start = 0; start + window_steps < batch.columns; start += window_steps) {
        for (std::size_t i = 0; i < batch.n_particles; ++i) {
            double qv = 0.0;
            for (std::size_t k = start; k < start + window_steps; ++k) {
                const double d = batch.at(k + 1, i) - batch.at(k, i);
                qv += d * d;
            }
            acc += qv;
        }
        windows += batch.n_particles;
    }
    return acc / static_cast<double>(windows);
}

}  // namespace nwlab::nelson
