#pragma once

#include <cstddef>
#include <vector>

#include "nwlab/core/field.hpp"
#include "nwlab/core/grid.hpp"
#include "nwlab/core/potential.hpp"
#include "nwlab/core/units.hpp"

namespace nwlab::schrodinger {

/// Discretised H = -(hbar^2/2m) d^2/dx^2 + V on a grid, with amplitude
/// treated as zero outside the sampled points.
///
/// Smooth potentials use the infinite-grid sinc (Fourier) kinetic matrix,
/// which resolves eigenvalues of well-contained states to near machine
/// precision; hard-wall potentials use the second-order three-point
/// stencil, whose Dirichlet eigenvectors are exact discrete sines. The
/// same operator backs the eigensolver and both evolvers, so eigenstates
/// are exact fixed points of the discrete flows.
class Hamiltonian {
public:
    Hamiltonian(const core::Potential& potential, const core::SpatialGrid& grid,
                const core::SimUnits& units);

    const core::SpatialGrid& grid() const { return grid_; }
    const core::SimUnits& units() const { return units_; }
    bool tridiagonal() const { return tridiagonal_; }

    /// Tridiagonal view (only when tridiagonal()): diagonal and
    /// subdiagonal (sub[0] unused).
    const std::vector<double>& diag() const { return diag_; }
    const std::vector<double>& subdiag() const { return subdiag_; }

    /// Dense row-major n*n view (only when !tridiagonal()).
    const std::vector<double>& dense() const { return dense_; }

    void apply(const double* in, double* out) const;
    void apply(const core::complex* in, core::complex* out) const;

private:
    core::SpatialGrid grid_;
    core::SimUnits units_;
    bool tridiagonal_ = false;
    std::vector<double> diag_;
    std::vector<double> subdiag_;
    std::vector<double> dense_;
};

}  // namespace nwlab::schrodinger
