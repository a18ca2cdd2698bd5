#include "nwlab/phase_space/characteristic.hpp"

#include <cmath>
#include <stdexcept>

#include "nwlab/core/fft.hpp"
#include "nwlab/core/warnings.hpp"

namespace nwlab::phase_space {

core::RealField CharacteristicFunction::diagonal_density() const {
    core::RealField rho0(x_grid);
    const std::size_t l0 = dx_grid.n / 2;  // dx = 0
    for (std::size_t j = 0; j < x_grid.n; ++j) rho0[j] = at(j, l0).real();
    return rho0;
}

double CharacteristicFunction::hermiticity_gap() const {
    double gap = 0.0;
    const std::size_t n = dx_grid.n;
    for (std::size_t j = 0; j < x_grid.n; ++j) {
        const core::complex* r = row(j);
        for (std::size_t l = 1; l < n; ++l) {
            // dx index pairing: dx_{n-l} = -dx_l
            gap = std::max(gap, std::abs(r[n - l] - std::conj(r[l])));
        }
    }
    return gap;
}

CharacteristicFunction characteristic_function(const schrodinger::WaveFunction& psi,
                                               const core::SpatialGrid& dx_grid) {
    const auto& xg = psi.grid();
    if (dx_grid.span() > xg.span() + 1e-12)
        throw std::domain_error(
            "characteristic_function: displacement span exceeds the x-grid span");
    if (std::abs(core::norm_l2(psi.field) - 1.0) > 1e-6)
        throw std::domain_error("characteristic_function: psi must be normalised");

    {
        std::vector<double> rho(xg.n);
        for (std::size_t j = 0; j < xg.n; ++j) rho[j] = std::norm(psi.field[j]);
        core::warnings::check_edge_decay(rho, "characteristic_function");
    }

    CharacteristicFunction out;
    out.x_grid = xg;
    out.dx_grid = dx_grid;
    out.time = psi.time;
    out.values.resize(xg.n * dx_grid.n);

    for (std::size_t l = 0; l < dx_grid.n; ++l) {
        const double s = 0.5 * dx_grid.x(l);
        if (s == 0.0) {
            for (std::size_t j = 0; j < xg.n; ++j)
                out.values[j * dx_grid.n + l] = std::norm(psi.field[j]);
            continue;
        }
        const auto plus = core::fourier_shift(psi.field, s);    // psi(x + dx/2)
        const auto minus = core::fourier_shift(psi.field, -s);  // psi(x - dx/2)
        for (std::size_t j = 0; j < xg.n; ++j)
            out.values[j * dx_grid.n + l] = std::conj(minus[j]) * plus[j];
    }
    return out;
}

}  // namespace nwlab::phase_space
