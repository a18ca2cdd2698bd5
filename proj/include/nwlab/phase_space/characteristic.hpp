#pragma once

#include <cstddef>
#include <vector>

#include "nwlab/core/field.hpp"
#include "nwlab/core/grid.hpp"
#include "nwlab/schrodinger/wavefunction.hpp"

namespace nwlab::phase_space {

/// rho(x, dx; t) = psi*(x - dx/2) psi(x + dx/2) sampled on the product of
/// an x grid and a displacement grid. Hermitian in the displacement by
/// construction: rho(x, -dx) = conj(rho(x, dx)).
struct CharacteristicFunction {
    std::vector<core::complex> values;  // x-major: values[j * dx_grid.n + l]
    core::SpatialGrid x_grid;
    core::SpatialGrid dx_grid;
    double time = 0.0;

    core::complex at(std::size_t j, std::size_t l) const {
        return values[j * dx_grid.n + l];
    }
    core::complex* row(std::size_t j) { return values.data() + j * dx_grid.n; }
    const core::complex* row(std::size_t j) const { return values.data() + j * dx_grid.n; }

    /// rho(x, 0), which is |psi(x)|^2.
    core::RealField diagonal_density() const;

    /// max |rho(x,-dx) - conj(rho(x,dx))| over the overlapping pairs.
    double hermiticity_gap() const;
};

/// Half-shifts psi(x +- dx/2) are evaluated with band-limited (Fourier)
/// interpolation, so the displacement grid may be finer than the x grid.
/// Requires dx_grid.span() <= x_grid.span() and a normalised psi.
CharacteristicFunction characteristic_function(const schrodinger::WaveFunction& psi,
                                               const core::SpatialGrid& dx_grid);

}  // namespace nwlab::phase_space
