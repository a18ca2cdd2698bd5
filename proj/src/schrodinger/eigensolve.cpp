#include "nwlab/schrodinger/eigensolve.hpp"

#include <cmath>
#include <stdexcept>

#include "symmetric_eigen.hpp"

namespace nwlab::schrodinger {

namespace {

// Leading lobe positive: flip sign if the first sample whose magnitude
// reaches a tenth of the peak is negative.
void fix_sign(std::vector<double>& col) {
    double peak = 0.0;
    for (double v : col) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) return;
    for (double v : col) {
        if (std::abs(v) >= 0.1 * peak) {
            if (v < 0.0)
                for (double& w : col) w = -w;
            return;
        }
    }
}

}  // namespace

std::vector<Eigenstate> solve_eigenstates(const Hamiltonian& h, std::size_t k) {
    const std::size_t n = h.grid().n;
    if (k == 0) throw std::domain_error("solve_eigenstates: k must be positive");
    if (k >= n / 4)
        throw std::domain_error("solve_eigenstates: k must be below n/4 for resolvable states");

    std::vector<double> d;
    std::vector<double> e;
    std::vector<double> z;
    if (h.tridiagonal()) {
        d = h.diag();
        e = h.subdiag();
        z.assign(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) z[i * n + i] = 1.0;
    } else {
        z = h.dense();  // consumed by tred2, which leaves Q in place
        detail::tred2(z, n, d, e);
    }
    detail::tqli(d, e, n, z);
    detail::sort_eigen(d, z, n);

    const double inv_sqrt_dx = 1.0 / std::sqrt(h.grid().dx());
    std::vector<Eigenstate> out;
    out.reserve(k);
    for (std::size_t s = 0; s < k; ++s) {
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = z[i * n + s];
        fix_sign(col);
        double nrm2 = 0.0;
        for (double v : col) nrm2 += v * v;
        const double scale = inv_sqrt_dx / std::sqrt(nrm2);  // columns are unit 2-norm already
        core::ComplexField psi(h.grid());
        for (std::size_t i = 0; i < n; ++i) psi[i] = col[i] * scale;
        out.push_back(Eigenstate{d[s], WaveFunction{std::move(psi), 0.0}});
    }
    return out;
}

std::vector<Eigenstate> solve_eigenstates(const core::Potential& potential,
                                          const core::SpatialGrid& grid,
                                          const core::SimUnits& units, std::size_t k) {
    return solve_eigenstates(Hamiltonian(potential, grid, units), k);
}

}  // namespace nwlab::schrodinger
