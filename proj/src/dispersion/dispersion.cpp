#include "nwlab/dispersion/dispersion.hpp"

#include <cmath>
#include <limits>
#include <tuple>
#include <stdexcept>
#include <variant>

#include "nwlab/core/fft.hpp"
#include "nwlab/core/warnings.hpp"
#include "nwlab/phase_space/characteristic.hpp"
#include "nwlab/schrodinger/eigensolve.hpp"

namespace nwlab::dispersion {

namespace {

// Potential value at an off-grid point; tabulated variants interpolate.
double potential_value_at(const core::Potential& potential, const core::SpatialGrid& grid,
                          double mass, double x) {
    if (const auto* tab = std::get_if<core::TabulatedPotential>(&potential.raw())) {
        const double f =
            std::clamp((x - grid.x_min) / grid.dx(), 0.0, static_cast<double>(grid.n - 1));
        const auto j = static_cast<std::size_t>(
            std::min(std::floor(f), static_cast<double>(grid.n - 2)));
        const double t = f - static_cast<double>(j);
        return tab->samples[j] + t * (tab->samples[j + 1] - tab->samples[j]);
    }
    return potential.value(x, mass);
}

phase_space::PhaseSpaceDensity wigner_of(const schrodinger::WaveFunction& psi,
                                         const core::SimUnits& units) {
    const auto& g = psi.grid();
    const core::SpatialGrid dxg{-0.5 * g.span(), 0.5 * g.span(), g.n};
    return phase_space::wigner_from_characteristic(
        phase_space::characteristic_function(psi, dxg), units);
}

}  // namespace

std::pair<double, double> momentum_moments(const phase_space::PhaseSpaceDensity& f) {
    double m0 = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
    for (std::size_t j = 0; j < f.x_grid.n; ++j) {
        const double* r = f.row(j);
        for (std::size_t k = 0; k < f.p_grid.n; ++k) {
            const double p = f.p_grid.x(k);
            m0 += r[k];
            m1 += p * r[k];
            m2 += p * p * r[k];
        }
    }
    const double mean = m1 / m0;
    double var = m2 / m0 - mean * mean;
    if (var < 0.0) {
        core::warnings::emit("momentum_moments: negative round-off variance clamped to 0");
        var = 0.0;
    }
    return {mean, var};
}

double min_time_interval(double var_p, const core::SimUnits& units) {
    if (!(var_p >= 0.0)) throw std::domain_error("min_time_interval: var_p must be >= 0");
    if (var_p == 0.0) return std::numeric_limits<double>::infinity();
    return units.mass * units.hbar / var_p;
}

DispersionReport energy_dispersions(const schrodinger::WaveFunction& psi,
                                    const core::Potential& potential,
                                    const core::SimUnits& units) {
    if (std::abs(core::norm_l2(psi.field) - 1.0) > 1e-6)
        throw std::domain_error("energy_dispersions: psi must be normalised");
    const auto& grid = psi.grid();
    const auto f = wigner_of(psi, units);

    DispersionReport rep;
    std::tie(rep.mean_p, rep.var_p) = momentum_moments(f);
    rep.classical = rep.var_p == 0.0;
    rep.delta_t_min = min_time_interval(rep.var_p, units);
    rep.delta_ek = rep.var_p / (2.0 * units.mass);

    const core::RealField v = potential.evaluate_on(grid, units.mass);
    double mean_x = 0.0;
    double mean_v = 0.0;
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double w = std::norm(psi.field[j]) * grid.dx();
        mean_x += grid.x(j) * w;
        mean_v += v[j] * w;
    }
    rep.delta_v = mean_v - potential_value_at(potential, grid, units.mass, mean_x);
    rep.delta_v_negative = rep.delta_v < 0.0;
    rep.delta_e = rep.delta_ek + rep.delta_v;
    rep.product_tk = rep.delta_t_min * rep.delta_ek;
    rep.product_te = rep.delta_t_min * rep.delta_e;
    return rep;
}

core::RealField stochastic_force(const schrodinger::PolarFields& polar,
                                 const core::SimUnits& units, double delta_t) {
    if (!(delta_t > 0.0)) throw std::domain_error("stochastic_force: delta_t must be positive");
    const auto vel = schrodinger::drift_fields(polar, units);
    core::RealField f(vel.u.grid);
    const double scale = 2.0 * units.mass / delta_t;
    for (std::size_t j = 0; j < f.size(); ++j)
        f[j] = vel.masked(j) ? 0.0 : scale * vel.u[j];
    return f;
}

ForceBalanceReport force_balance_residual(const schrodinger::WaveFunction& psi,
                                          const core::Potential& potential,
                                          const core::SimUnits& units) {
    const auto& grid = psi.grid();
    const auto f = wigner_of(psi, units);
    const auto [mean_p, var_p] = momentum_moments(f);
    if (std::abs(mean_p) >= 1e-6)
        throw std::domain_error(
            "force_balance_residual: expects a stationary state (|<p>| < 1e-6)");

    core::RealField rho(grid);
    for (std::size_t j = 0; j < grid.n; ++j) rho[j] = std::norm(psi.field[j]);
    const core::RealField grad_rho = core::spectral_derivative(rho);
    const core::RealField grad_v = potential.gradient_on(grid, units.mass);

    const auto polar = schrodinger::polar_decompose(psi);

    ForceBalanceReport rep;
    rep.var_p = var_p;
    rep.delta_t_used = min_time_interval(var_p, units);
    rep.node_mask = polar.node_mask;
    rep.residual = core::RealField(grid);
    rep.stochastic_force =
        stochastic_force(polar, units, std::isinf(rep.delta_t_used) ? 1.0 : rep.delta_t_used);

    double res2 = 0.0;
    double ref2 = 0.0;
    for (std::size_t j = 0; j < grid.n; ++j) {
        if (polar.masked(j)) continue;
        const double res = var_p / units.mass * grad_rho[j] + rho[j] * grad_v[j];
        rep.residual[j] = res;
        res2 += res * res;
        const double ref = rho[j] * grad_v[j];
        ref2 += ref * ref;
    }
    rep.rel_norm = ref2 > 0.0 ? std::sqrt(res2 / ref2)
                              : std::numeric_limits<double>::infinity();
    return rep;
}

OscillatorReport oscillator_report(std::size_t n, double omega, const core::SimUnits& units) {
    if (n > 10) throw std::domain_error("oscillator_report: n must be <= 10");
    if (!(omega > 0.0)) throw std::domain_error("oscillator_report: omega must be positive");

    // Domain scaled to the oscillator length; wide enough for n <= 10 and
    // for the displacement decay of the characteristic function.
    const double x_char = std::sqrt(units.hbar / (units.mass * omega));
    const auto grid = core::make_grid(-16.0 * x_char, 16.0 * x_char, 512);
    const auto pot = core::Potential::harmonic(omega);
    const auto states = schrodinger::solve_eigenstates(pot, grid, units, n + 1);
    const auto rep = energy_dispersions(states[n].psi, pot, units);

    OscillatorReport out;
    out.n = n;
    out.energy = states[n].energy;
    out.delta_e = rep.delta_e;
    out.delta_t_min = rep.delta_t_min;
    out.period_ratio = rep.delta_t_min * omega;
    out.band_lo = states[n].energy - 0.5 * units.hbar * omega;
    out.band_hi = states[n].energy + 0.5 * units.hbar * omega;
    out.interval_comparable_to_period = out.period_ratio < 1.0;
    return out;
}

}  // namespace nwlab::dispersion
