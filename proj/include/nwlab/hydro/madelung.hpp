#pragma once

#include "nwlab/core/field.hpp"
#include "nwlab/core/potential.hpp"
#include "nwlab/core/units.hpp"
#include "nwlab/schrodinger/branch.hpp"
#include "nwlab/schrodinger/wavefunction.hpp"

namespace nwlab::hydro {

/// Systematic and osmotic velocity fields evolved as primitives. The
/// supported regime is nu_plus = D0, nu_minus = 0.
struct HydroState {
    core::RealField v;
    core::RealField u;
    double time = 0.0;
    double nu_plus = 0.0;
    double nu_minus = 0.0;
};

/// Builds hydro initial data from a wavefunction: drift fields on the
/// unmasked region, extended linearly into the masked tails (the module
/// is restricted to nodeless Gaussian-class states, whose v and u are
/// affine there).
HydroState from_wavefunction(const schrodinger::WaveFunction& psi,
                             const core::SimUnits& units);

/// Coupled first-order system
///   dv/dt + d/dx [ v^2/2 - lambda u^2/2 - lambda nu+ du/dx ] = -dV/dx / m
///   du/dt + d/dx [ v u + nu+ dv/dx ] = 0
/// integrated with classic RK4 in time and fourth-order differences in
/// space (one-sided at the domain ends, exact on the affine fields of
/// the Gaussian class). Only lambda = +1 runs here; the lambda = -1
/// physics lives in schrodinger::evolve_parabolic, which integrates the
/// amplitude form stably.
///
/// Enforces the explicit-stability bound dt <= 0.2 dx^2 / nu+. Aborts
/// with the step index on NaN/blow-up, and when the density
/// reconstructed from u develops an interior hole (node formation).
HydroState evolve_madelung(const HydroState& state, const core::Potential& potential,
                           const core::SimUnits& units, double dt, std::size_t steps,
                           schrodinger::BranchParameter lambda);

/// Density reconstructed from u via ln rho(x) = ln rho(x0) + int u/D0,
/// normalised to unit integral.
core::RealField density_from_osmotic(const core::RealField& u, const core::SimUnits& units);

/// Both evolution routes from matched initial data: Schrodinger
/// (Crank-Nicolson, then drift fields) against the Madelung integrator.
/// L2 discrepancies of v and u at t_final over the jointly unmasked
/// region. Throws if a node forms on either route.
struct ConsistencyReport {
    double v_l2 = 0.0;
    double u_l2 = 0.0;
    double t_final = 0.0;
};

ConsistencyReport hydro_consistency(const schrodinger::WaveFunction& psi0,
                                    const core::Potential& potential,
                                    const core::SimUnits& units, double t_final);

}  // namespace nwlab::hydro
