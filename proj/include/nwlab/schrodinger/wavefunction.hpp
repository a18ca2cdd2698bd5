#pragma once

#include "nwlab/core/field.hpp"
#include "nwlab/core/grid.hpp"
#include "nwlab/core/units.hpp"

namespace nwlab::schrodinger {

/// A normalised state on a grid together with its evolution time.
struct WaveFunction {
    core::ComplexField field;
    double time = 0.0;

    const core::SpatialGrid& grid() const { return field.grid; }
};

/// Rescales to unit L2 norm (discrete quadrature with weight dx).
void normalize(core::ComplexField& field);

/// Normalised Gaussian packet exp(-(x-x0)^2/(4 sigma^2) + i k0 x), i.e.
/// position density variance sigma^2 and mean momentum hbar*k0.
WaveFunction gaussian_packet(const core::SpatialGrid& grid, double x0, double sigma, double k0);

/// max |psi1 - psi2| over the grid.
double max_abs_difference(const core::ComplexField& a, const core::ComplexField& b);

}  // namespace nwlab::schrodinger
