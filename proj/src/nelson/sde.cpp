#include "nwlab/nelson/sde.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "nwlab/core/warnings.hpp"
#include "nwlab/simd/kernels.hpp"
#include "nwlab/simd/philox.hpp"

namespace nwlab::nelson {

Ensemble TrajectoryBatch::final_ensemble() const {
    Ensemble out;
    out.positions.assign(column(columns - 1), column(columns - 1) + n_particles);
    out.time = t0 + static_cast<double>(columns - 1) * dt;
    out.seed = seed;
    out.counter_offset = counter_offset0_ + (columns - 1);
    return out;
}

std::vector<double> drift_table(const schrodinger::VelocityFields& drift) {
    const std::size_t n = drift.v.size();
    std::vector<double> c(n);
    double peak = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        c[j] = drift.v[j] + drift.u[j];
        if (!drift.masked(j)) peak = std::max(peak, std::abs(c[j]));
    }
    // Masked nodes: nearest unmasked value; then clamp everything to ten
    // times the peak unmasked drift (u diverges at nodes).
    std::ptrdiff_t last_ok = -1;
    const auto nn = static_cast<std::ptrdiff_t>(n);
    std::vector<std::ptrdiff_t> nearest(n, -1);
    for (std::ptrdiff_t j = 0; j < nn; ++j) {
        if (!drift.masked(static_cast<std::size_t>(j))) last_ok = j;
        nearest[static_cast<std::size_t>(j)] = last_ok;
    }
    std::ptrdiff_t next_ok = -1;
    for (std::ptrdiff_t j = nn - 1; j >= 0; --j) {
        if (!drift.masked(static_cast<std::size_t>(j))) next_ok = j;
        const auto ju = static_cast<std::size_t>(j);
        if (drift.masked(ju)) {
            const std::ptrdiff_t left = nearest[ju];
            const std::ptrdiff_t right = next_ok;
            std::ptrdiff_t pick = -1;
            if (left >= 0 && right >= 0)
                pick = (j - left) <= (right - j) ? left : right;
            else
                pick = left >= 0 ? left : right;
            if (pick < 0) throw std::domain_error("drift_table: all nodes masked");
            c[ju] = c[static_cast<std::size_t>(pick)];
        }
    }
    const double cap = 10.0 * peak;
    if (cap > 0.0)
        for (double& v : c) v = std::clamp(v, -cap, cap);
    return c;
}

TrajectoryBatch step_forward_sde(const Ensemble& ensemble,
                                 const schrodinger::VelocityFields& drift,
                                 const core::SimUnits& units, double dt, std::size_t steps) {
    if (!(dt > 0.0)) throw std::domain_error("step_forward_sde: dt must be positive");
    if (steps == 0) throw std::domain_error("step_forward_sde: need at least one step");
    if (ensemble.size() == 0) throw std::domain_error("step_forward_sde: empty ensemble");
    const std::size_t n_grid = drift.v.size();
    const auto& grid = drift.v.grid;
    const std::size_t n = ensemble.size();

    const std::vector<double> table = drift_table(drift);

    // Heuristic stability guide: dt * max|grad c| should stay below 0.1.
    double max_grad = 0.0;
    for (std::size_t j = 1; j < n_grid; ++j)
        max_grad = std::max(max_grad, std::abs(table[j] - table[j - 1]) / grid.dx());
    if (dt * max_grad >= 0.1) {
        std::ostringstream os;
        os << "step_forward_sde: dt * max|grad c| = " << dt * max_grad
           << " exceeds the 0.1 stability heuristic";
        core::warnings::emit(os.str());
    }

    const std::size_t est_bytes = (steps + 1) * n * sizeof(double);
    if (est_bytes > std::size_t{1} << 30)
        throw std::domain_error("step_forward_sde: batch would exceed 1 GiB; chunk the run");

    TrajectoryBatch batch;
    batch.n_particles = n;
    batch.columns = steps + 1;
    batch.dt = dt;
    batch.t0 = ensemble.time;
    batch.seed = ensemble.seed;
    batch.counter_offset0_ = ensemble.counter_offset;
    batch.positions.resize((steps + 1) * n);
    std::copy(ensemble.positions.begin(), ensemble.positions.end(), batch.positions.begin());

    const simd::DriftTable dtab{table.data(), n_grid, grid.x_min, 1.0 / grid.dx()};
    const double x_lo = grid.x(0);
    const double x_hi = grid.x(n_grid - 1);
    const double noise_scale = std::sqrt(2.0 * units.d0() * dt);
    const auto& backend = simd::active_backend();
    const auto stream = static_cast<std::uint32_t>(simd::Stream::sde_noise);

    // Fixed particle blocks; any thread may run any block, results are
    // identical because draws are keyed by global particle index.
    constexpr std::size_t block = 8192;
    const std::size_t n_blocks = (n + block - 1) / block;
    std::vector<std::uint64_t> block_exits(n_blocks, 0);

    auto run_block = [&](std::size_t b) {
        const std::size_t first = b * block;
        const std::size_t count = std::min(block, n - first);
        std::vector<double> noise(count);
        std::uint64_t exits = 0;
        for (std::size_t k = 0; k < steps; ++k) {
            const std::uint64_t step_idx = ensemble.counter_offset + k;
            backend.gaussian_fill(ensemble.seed, stream, first, step_idx, noise.data(), count);
            double* prev = batch.positions.data() + k * n + first;
            double* next = batch.positions.data() + (k + 1) * n + first;
            std::memcpy(next, prev, count * sizeof(double));
            backend.em_step(next, count, dtab, dt, noise_scale, noise.data(), x_lo, x_hi,
                            &exits);
        }
        block_exits[b] = exits;
    };

    const unsigned workers = std::min<unsigned>(simd::threads(), static_cast<unsigned>(n_blocks));
    if (workers <= 1) {
        for (std::size_t b = 0; b < n_blocks; ++b) run_block(b);
    } else {
        std::atomic<std::size_t> cursor{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t b = cursor.fetch_add(1);
                    if (b >= n_blocks) return;
                    run_block(b);
                }
            });
        for (auto& t : pool) t.join();
    }

    for (std::uint64_t e : block_exits) batch.exit_count += e;
    const double exit_fraction =
        static_cast<double>(batch.exit_count) / (static_cast<double>(n) * steps);
    if (exit_fraction > 0.01) {
        std::ostringstream os;
        os << "step_forward_sde: " << exit_fraction * 100.0
           << "% of particle-steps left the grid; the domain is too narrow for this drift";
        throw std::runtime_error(os.str());
    }
    return batch;
}

}  // namespace nwlab::nelson
