#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "nwlab/core/field.hpp"
#include "nwlab/core/potential.hpp"
#include "nwlab/core/units.hpp"
#include "nwlab/phase_space/wigner.hpp"
#include "nwlab/schrodinger/polar.hpp"
#include "nwlab/schrodinger/wavefunction.hpp"

namespace nwlab::dispersion {

/// Global momentum moments of the phase-space density: (mean, variance).
/// A negative round-off variance is clamped to zero with a warning.
std::pair<double, double> momentum_moments(const phase_space::PhaseSpaceDensity& f);

/// Minimum meaningful time interval m hbar / var_p. A dispersion-free
/// (classical) state, var_p = 0, returns +infinity rather than throwing.
double min_time_interval(double var_p, const core::SimUnits& units);

/// Momentum/energy dispersions and the time-energy products. delta_v is
/// the Jensen gap <V> - V(<x>), nonnegative for convex potentials; a
/// negative value (concave potential) is flagged, not clamped.
struct DispersionReport {
    double mean_p = 0.0;
    double var_p = 0.0;
    double delta_t_min = 0.0;  // m hbar / var_p
    double delta_ek = 0.0;     // var_p / 2m
    double delta_v = 0.0;      // <V> - V(<x>)
    double delta_e = 0.0;      // delta_ek + delta_v
    double product_tk = 0.0;   // delta_t_min * delta_ek == hbar/2
    double product_te = 0.0;   // delta_t_min * delta_e  >= hbar/2
    bool classical = false;        // var_p = 0
    bool delta_v_negative = false;
};

DispersionReport energy_dispersions(const schrodinger::WaveFunction& psi,
                                    const core::Potential& potential,
                                    const core::SimUnits& units);

/// Stationary force balance: residual(x) = (var_p/m) grad(rho0) + rho0 grad(V)
/// on node-unmasked points, with var_p the global dispersion. rel_norm is
/// L2(residual)/L2(rho0 grad V); a free particle (grad V = 0) reports
/// +infinity there. Requires |<p>| < 1e-6 (stationary input).
struct ForceBalanceReport {
    core::RealField residual;
    core::RealField stochastic_force;  // 2 m u / delta_t_min
    std::vector<std::uint8_t> node_mask;
    double rel_norm = 0.0;
    double var_p = 0.0;
    double delta_t_used = 0.0;
};

ForceBalanceReport force_balance_residual(const schrodinger::WaveFunction& psi,
                                          const core::Potential& potential,
                                          const core::SimUnits& units);

/// Osmotic force f_s = 2 m u / delta_t with u = D0 grad(rho)/rho (zero on
/// masked points).
core::RealField stochastic_force(const schrodinger::PolarFields& polar,
                                 const core::SimUnits& units, double delta_t);

/// Oscillator numbers for the n-th eigenstate: energy, dispersion,
/// minimum interval, the interval-to-period ratio delta_t * omega, and
/// the overlapping energy band [E_n - hbar w/2, E_n + hbar w/2].
struct OscillatorReport {
    std::size_t n = 0;
    double energy = 0.0;
    double delta_e = 0.0;
    double delta_t_min = 0.0;
    double period_ratio = 0.0;  // delta_t_min * omega, >= 1 only for n = 0
    double band_lo = 0.0;
    double band_hi = 0.0;
    bool interval_comparable_to_period = false;  // delta_t_min * omega < 1
};

OscillatorReport oscillator_report(std::size_t n, double omega, const core::SimUnits& units);

}  // namespace nwlab::dispersion
