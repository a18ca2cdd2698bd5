#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "nwlab/core/field.hpp"
#include "nwlab/core/grid.hpp"
#include "nwlab/core/units.hpp"
#include "nwlab/phase_space/characteristic.hpp"

namespace nwlab::phase_space {

/// F(x, p; t): real quasiprobability on the product of the x grid and
/// the momentum grid conjugate to the displacement grid. Integrates to 1;
/// may be negative for excited states.
struct PhaseSpaceDensity {
    std::vector<double> values;  // x-major: values[j * p_grid.n + k]
    core::SpatialGrid x_grid;
    core::SpatialGrid p_grid;
    double time = 0.0;

    double at(std::size_t j, std::size_t k) const { return values[j * p_grid.n + k]; }
    double* row(std::size_t j) { return values.data() + j * p_grid.n; }
    const double* row(std::size_t j) const { return values.data() + j * p_grid.n; }

    double integral() const;
};

/// F(x,p) = (2 pi hbar)^{-1} integral rho(x, dx) exp(-i p dx / hbar) d(dx)
/// per x row (FFT). Checks the Hermiticity invariant, checks that the
/// imaginary residue stays below 1e-10, and drops it.
PhaseSpaceDensity wigner_from_characteristic(const CharacteristicFunction& rho,
                                             const core::SimUnits& units);

/// (x-marginal, p-marginal), each normalised by construction of F.
std::pair<core::RealField, core::RealField> marginals(const PhaseSpaceDensity& f);

/// Local momentum moments two ways: quadratic Taylor fit of rho(x, .) at
/// dx = 0 (fourth-order central differences) against direct p-integrals
/// of F. Reported over the x where rho(x,0) > 1e-6.
struct MomentCheckReport {
    core::RealField mean_p_fit;        // from the small-displacement fit
    core::RealField mean_p_direct;     // from integrating F
    core::RealField mean_p2_fit;
    core::RealField mean_p2_direct;
    std::vector<std::uint8_t> checked;  // x points that passed the density gate
    double max_dev_mean_p = 0.0;
    double max_dev_mean_p2 = 0.0;
};

MomentCheckReport moment_expansion_check(const CharacteristicFunction& rho,
                                         const PhaseSpaceDensity& f,
                                         const core::SimUnits& units);

/// Minimum value, its location, and the negative mass fraction
/// integral |min(F,0)| / integral |F|.
struct NegativityReport {
    double min_value = 0.0;
    double negative_mass_fraction = 0.0;
    double x_of_min = 0.0;
    double p_of_min = 0.0;
};

NegativityReport negativity_report(const PhaseSpaceDensity& f);

}  // namespace nwlab::phase_space
