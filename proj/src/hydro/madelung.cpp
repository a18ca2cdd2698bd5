#include "nwlab/hydro/madelung.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "nwlab/schrodinger/evolve.hpp"
#include "nwlab/schrodinger/polar.hpp"

namespace nwlab::hydro {

namespace {

// Fourth-order first derivative, one-sided 5-point stencils at the
// domain ends (exact through quartics, so exact on the affine fields of
// the Gaussian class).
void diff4(const std::vector<double>& f, double inv_dx, std::vector<double>& out) {
    const std::size_t n = f.size();
    const double c = inv_dx / 12.0;
    out[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * c;
    out[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * c;
    for (std::size_t j = 2; j + 2 < n; ++j)
        out[j] = (f[j - 2] - 8.0 * f[j - 1] + 8.0 * f[j + 1] - f[j + 2]) * c;
    out[n - 2] =
        (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) * c;
    out[n - 1] =
        (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] +
         3.0 * f[n - 5]) * c;
}

struct Workspace {
    std::vector<double> du, dv, bracket, kv, ku, tv, tu, av, au;
    explicit Workspace(std::size_t n)
        : du(n), dv(n), bracket(n), kv(n), ku(n), tv(n), tu(n), av(n), au(n) {}
};

// One RHS evaluation of the coupled system (lambda = +1, nu_minus = 0).
void rhs(const std::vector<double>& v, const std::vector<double>& u,
         const std::vector<double>& grad_v_over_m, double nu_plus, double inv_dx,
         Workspace& w, std::vector<double>& out_v, std::vector<double>& out_u) {
    const std::size_t n = v.size();
    diff4(u, inv_dx, w.du);
    for (std::size_t j = 0; j < n; ++j)
        w.bracket[j] = 0.5 * v[j] * v[j] - 0.5 * u[j] * u[j] - nu_plus * w.du[j];
    diff4(w.bracket, inv_dx, out_v);
    for (std::size_t j = 0; j < n; ++j) out_v[j] = -out_v[j] - grad_v_over_m[j];

    diff4(v, inv_dx, w.dv);
    for (std::size_t j = 0; j < n; ++j) w.bracket[j] = v[j] * u[j] + nu_plus * w.dv[j];
    diff4(w.bracket, inv_dx, out_u);
    for (std::size_t j = 0; j < n; ++j) out_u[j] = -out_u[j];

}

// Node detectors. A node shows up either as density below 1e-10 between
// the bulk edges, or as a prominent interior dip: a local minimum under
// 1e-2 of peak flanked on both sides by at least ten times its value (a
// zero crossing sampled off-grid leaves exactly that signature, while
// the single-bump Gaussian class has no interior minima at all).
bool has_interior_dip(const std::vector<double>& lnrho) {
    const std::size_t n = lnrho.size();
    double peak = lnrho[0];
    for (double v : lnrho) peak = std::max(peak, v);
    const double bulk = peak + std::log(1e-6);
    const double hole = peak + std::log(1e-10);
    const double dip_level = peak + std::log(1e-2);
    const double prominence = std::log(10.0);

    std::size_t lo = n;
    std::size_t hi = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (lnrho[j] >= bulk) {
            lo = std::min(lo, j);
            hi = std::max(hi, j);
        }
    }
    double left_max = -1e300;
    for (std::size_t j = lo; j <= hi && j < n; ++j) {
        if (lnrho[j] < hole) return true;
        left_max = std::max(left_max, lnrho[j]);
        if (lnrho[j] < dip_level && left_max > lnrho[j] + prominence) {
            for (std::size_t k = j + 1; k <= hi; ++k)
                if (lnrho[k] > lnrho[j] + prominence) return true;
        }
    }
    return false;
}

bool has_interior_hole(const std::vector<double>& u, double d0, double dx) {
    const std::size_t n = u.size();
    std::vector<double> lnrho(n, 0.0);
    for (std::size_t j = 1; j < n; ++j)
        lnrho[j] = lnrho[j - 1] + 0.5 * (u[j] + u[j - 1]) * dx / d0;
    return has_interior_dip(lnrho);
}

bool density_has_node(const core::RealField& rho) {
    std::vector<double> lnrho(rho.size());
    for (std::size_t j = 0; j < rho.size(); ++j)
        lnrho[j] = std::log(rho[j] + 1e-300);
    return has_interior_dip(lnrho);
}

}  // namespace

core::RealField density_from_osmotic(const core::RealField& u, const core::SimUnits& units) {
    const std::size_t n = u.size();
    const double dx = u.grid.dx();
    core::RealField rho(u.grid);
    std::vector<double> lnrho(n, 0.0);
    for (std::size_t j = 1; j < n; ++j)
        lnrho[j] = lnrho[j - 1] + 0.5 * (u[j] + u[j - 1]) * dx / units.d0();
    double peak = lnrho[0];
    for (double v : lnrho) peak = std::max(peak, v);
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        rho[j] = std::exp(lnrho[j] - peak);
        total += rho[j] * dx;
    }
    for (auto& v : rho.samples) v /= total;
    return rho;
}

HydroState from_wavefunction(const schrodinger::WaveFunction& psi,
                             const core::SimUnits& units) {
    const auto polar = schrodinger::polar_decompose(psi);
    const auto vel = schrodinger::drift_fields(polar, units);
    const std::size_t n = vel.v.size();

    std::size_t lo = n;
    std::size_t hi = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (!vel.masked(j)) {
            lo = std::min(lo, j);
            hi = std::max(hi, j);
        }
    }
    if (lo >= hi) throw std::domain_error("hydro: state has no resolvable bulk");
    for (std::size_t j = lo; j <= hi; ++j)
        if (vel.masked(j))
            throw std::domain_error(
                "hydro: interior node detected; only nodeless states are supported");

    HydroState out;
    out.v = vel.v;
    out.u = vel.u;
    out.time = psi.time;
    out.nu_plus = units.d0();
    out.nu_minus = 0.0;

    // Affine extension into the masked tails (Gaussian-class fields are
    // affine there; slopes from the unmasked segment are exact for them).
    const double dx = vel.v.grid.dx();
    auto extend = [&](core::RealField& f) {
        const double slope_lo = (f[lo + 1] - f[lo]) / dx;
        for (std::size_t j = lo; j-- > 0;) f[j] = f[lo] + slope_lo * (static_cast<double>(j) -
                                                                      static_cast<double>(lo)) * dx;
        const double slope_hi = (f[hi] - f[hi - 1]) / dx;
        for (std::size_t j = hi + 1; j < n; ++j)
            f[j] = f[hi] + slope_hi * (static_cast<double>(j) - static_cast<double>(hi)) * dx;
    };
    extend(out.v);
    extend(out.u);
    return out;
}

HydroState evolve_madelung(const HydroState& state, const core::Potential& potential,
                           const core::SimUnits& units, double dt, std::size_t steps,
                           schrodinger::BranchParameter lambda) {
    if (lambda.lambda() != 1)
        throw std::invalid_argument(
            "evolve_madelung: only the lambda = +1 branch runs as a coupled system; use "
            "schrodinger::evolve_parabolic for lambda = -1");
    if (!(dt > 0.0)) throw std::domain_error("evolve_madelung: dt must be positive");
    const auto& grid = state.v.grid;
    const std::size_t n = grid.n;
    if (n < 8) throw std::domain_error("evolve_madelung: grid too small for the stencils");
    const double dx = grid.dx();
    const double nu = state.nu_plus;
    if (nu > 0.0 && dt > 0.2 * dx * dx / nu)
        throw std::domain_error("evolve_madelung: dt exceeds the stability bound 0.2 dx^2/nu+");
    if (state.nu_minus != 0.0)
        throw std::domain_error("evolve_madelung: nu_minus != 0 is unsupported");

    const core::RealField grad_v_field = potential.gradient_on(grid, units.mass);
    std::vector<double> grad_v_over_m(n);
    for (std::size_t j = 0; j < n; ++j) grad_v_over_m[j] = grad_v_field[j] / units.mass;

    std::vector<double> v = state.v.samples;
    std::vector<double> u = state.u.samples;
    Workspace w(n);
    const double inv_dx = 1.0 / dx;

    if (has_interior_hole(u, units.d0(), dx))
        throw std::runtime_error("evolve_madelung: initial density has an interior node");

    for (std::size_t s = 0; s < steps; ++s) {
        rhs(v, u, grad_v_over_m, nu, inv_dx, w, w.kv, w.ku);  // k1
        for (std::size_t j = 0; j < n; ++j) {
            w.av[j] = w.kv[j];
            w.au[j] = w.ku[j];
            w.tv[j] = v[j] + 0.5 * dt * w.kv[j];
            w.tu[j] = u[j] + 0.5 * dt * w.ku[j];
        }
        rhs(w.tv, w.tu, grad_v_over_m, nu, inv_dx, w, w.kv, w.ku);  // k2
        for (std::size_t j = 0; j < n; ++j) {
            w.av[j] += 2.0 * w.kv[j];
            w.au[j] += 2.0 * w.ku[j];
            w.tv[j] = v[j] + 0.5 * dt * w.kv[j];
            w.tu[j] = u[j] + 0.5 * dt * w.ku[j];
        }
        rhs(w.tv, w.tu, grad_v_over_m, nu, inv_dx, w, w.kv, w.ku);  // k3
        for (std::size_t j = 0; j < n; ++j) {
            w.av[j] += 2.0 * w.kv[j];
            w.au[j] += 2.0 * w.ku[j];
            w.tv[j] = v[j] + dt * w.kv[j];
            w.tu[j] = u[j] + dt * w.ku[j];
        }
        rhs(w.tv, w.tu, grad_v_over_m, nu, inv_dx, w, w.kv, w.ku);  // k4
        for (std::size_t j = 0; j < n; ++j) {
            v[j] += dt / 6.0 * (w.av[j] + w.kv[j]);
            u[j] += dt / 6.0 * (w.au[j] + w.ku[j]);
        }

        // Damped-Jacobi smoothing: the velocity-primitive system piles
        // perturbation energy onto the grid scale in the |u|-steep tails;
        // one quarter-weight Laplacian pass per step absorbs it and is an
        // exact no-op on the affine fields of the supported Gaussian
        // class.
        for (std::size_t j = 1; j + 1 < n; ++j) {
            w.tv[j] = v[j] + 0.25 * (v[j - 1] - 2.0 * v[j] + v[j + 1]);
            w.tu[j] = u[j] + 0.25 * (u[j - 1] - 2.0 * u[j] + u[j + 1]);
        }
        for (std::size_t j = 1; j + 1 < n; ++j) {
            v[j] = w.tv[j];
            u[j] = w.tu[j];
        }

        if ((s + 1) % 16 == 0 || s + 1 == steps) {
            for (std::size_t j = 0; j < n; ++j) {
                if (!std::isfinite(v[j]) || !std::isfinite(u[j]) || std::abs(v[j]) > 1e8 ||
                    std::abs(u[j]) > 1e8)
                    throw std::runtime_error("evolve_madelung: blow-up detected at step " +
                                             std::to_string(s + 1));
            }
            if (has_interior_hole(u, units.d0(), dx))
                throw std::runtime_error("evolve_madelung: node formation detected at step " +
                                         std::to_string(s + 1));
        }
    }

    HydroState out;
    out.v = core::RealField(grid, std::move(v));
    out.u = core::RealField(grid, std::move(u));
    out.time = state.time + static_cast<double>(steps) * dt;
    out.nu_plus = state.nu_plus;
    out.nu_minus = state.nu_minus;
    return out;
}

namespace {

double lerp_field(const core::RealField& f, double x) {
    const auto& g = f.grid;
    const double fpos =
        std::clamp((x - g.x_min) / g.dx(), 0.0, static_cast<double>(g.n - 1));
    const auto j =
        static_cast<std::size_t>(std::min(std::floor(fpos), static_cast<double>(g.n - 2)));
    const double t = fpos - static_cast<double>(j);
    return f[j] + t * (f[j + 1] - f[j]);
}

}  // namespace

ConsistencyReport hydro_consistency(const schrodinger::WaveFunction& psi0,
                                    const core::Potential& potential,
                                    const core::SimUnits& units, double t_final) {
    if (!(t_final > 0.0)) throw std::domain_error("hydro_consistency: t_final must be positive");
    const auto& grid = psi0.grid();

    // The velocity-primitive system amplifies grid-scale noise at a rate
    // ~ |u| k in the far tails, so the comparison runs on the physical
    // bulk (unmasked region plus margin) at a fixed moderate resolution,
    // where the scheme is exact for the Gaussian-class fields.
    const HydroState full0 = from_wavefunction(psi0, units);
    const auto polar0 = schrodinger::polar_decompose(psi0);
    std::size_t lo = grid.n;
    std::size_t hi = 0;
    for (std::size_t j = 0; j < grid.n; ++j)
        if (!polar0.masked(j)) {
            lo = std::min(lo, j);
            hi = std::max(hi, j);
        }
    const double pad = 0.15 * (grid.x(hi) - grid.x(lo));
    const double w_lo = std::max(grid.x_min, grid.x(lo) - pad);
    const double w_hi = std::min(grid.x(grid.n - 1), grid.x(hi) + pad);
    const core::SpatialGrid hgrid{w_lo, w_hi, 128};

    HydroState h0;
    h0.v = core::RealField(hgrid);
    h0.u = core::RealField(hgrid);
    h0.time = psi0.time;
    h0.nu_plus = units.d0();
    for (std::size_t j = 0; j < hgrid.n; ++j) {
        h0.v[j] = lerp_field(full0.v, hgrid.x(j));
        h0.u[j] = lerp_field(full0.u, hgrid.x(j));
    }

    const double dx_h = hgrid.dx();
    const double dt_cap = std::min(0.15 * dx_h * dx_h / h0.nu_plus, 2e-3);
    const auto h_steps = static_cast<std::size_t>(std::ceil(t_final / dt_cap));
    const double dt_h = t_final / static_cast<double>(h_steps);
    const HydroState h1 = evolve_madelung(h0, potential, units, dt_h, h_steps,
                                          schrodinger::BranchParameter::hyperbolic());

    // Schrodinger route on the original grid.
    const auto cn_steps =
        static_cast<std::size_t>(std::ceil(t_final / std::min(1e-3, t_final)));
    const double dt_cn = t_final / static_cast<double>(cn_steps);
    const auto psi1 = schrodinger::evolve_unitary(psi0, potential, units, dt_cn, cn_steps);
    if (density_has_node(core::density_of(psi1.field)))
        throw std::runtime_error("hydro_consistency: node formed on the Schrodinger route");
    const auto polar1 = schrodinger::polar_decompose(psi1);
    const auto vel1 = schrodinger::drift_fields(polar1, units);

    // Compare at hydro nodes that sit inside the unmasked region of the
    // evolved state.
    ConsistencyReport rep;
    rep.t_final = t_final;
    double v2 = 0.0;
    double u2 = 0.0;
    for (std::size_t j = 0; j < hgrid.n; ++j) {
        const double x = hgrid.x(j);
        const double fpos = (x - grid.x_min) / grid.dx();
        const auto jf = static_cast<std::size_t>(
            std::clamp(fpos, 0.0, static_cast<double>(grid.n - 1)));
        if (vel1.masked(jf) || (jf + 1 < grid.n && vel1.masked(jf + 1))) continue;
        const double dv = lerp_field(vel1.v, x) - h1.v[j];
        const double du = lerp_field(vel1.u, x) - h1.u[j];
        v2 += dv * dv;
        u2 += du * du;
    }
    rep.v_l2 = std::sqrt(v2 * dx_h);
    rep.u_l2 = std::sqrt(u2 * dx_h);
    return rep;
}

}  // namespace nwlab::hydro
