#include "nwlab/phase_space/wigner.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "nwlab/core/fft.hpp"

namespace nwlab::phase_space {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

double PhaseSpaceDensity::integral() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s * x_grid.dx() * p_grid.dx();
}

PhaseSpaceDensity wigner_from_characteristic(const CharacteristicFunction& rho,
                                             const core::SimUnits& units) {
    const double herm = rho.hermiticity_gap();
    if (herm > 1e-12)
        throw std::runtime_error("wigner_from_characteristic: Hermiticity gap " +
                                 std::to_string(herm) + " exceeds 1e-12");

    const std::size_t n = rho.dx_grid.n;
    const double ddx = rho.dx_grid.dx();
    core::FftPlan plan(n);

    PhaseSpaceDensity out;
    out.x_grid = rho.x_grid;
    out.p_grid = core::momentum_grid(rho.dx_grid, units);
    out.time = rho.time;
    out.values.resize(rho.x_grid.n * n);

    // F(x, p_k) = (ddx / 2 pi hbar) * (-1)^(k - n/2) * DFT_k[(-1)^l rho(x, dx_l)]
    const double scale = ddx / (two_pi * units.hbar);
    const bool half_even = (n / 2) % 2 == 0;
    std::vector<core::complex> buf(n);
    double max_imag = 0.0;
    for (std::size_t j = 0; j < rho.x_grid.n; ++j) {
        const core::complex* r = rho.row(j);
        for (std::size_t l = 0; l < n; ++l)
            buf[l] = (l % 2 == 0) ? r[l] : -r[l];
        // The l = 0 bin holds the unpaired displacement -n/2*ddx (its
        // mirror is aliased onto itself); Hermitian extension forces it
        // real, so the imaginary part is pure sampling alias.
        buf[0] = buf[0].real();
        plan.forward(buf);
        double* f = out.row(j);
        for (std::size_t k = 0; k < n; ++k) {
            const bool flip = ((k % 2 == 0) == half_even) ? false : true;
            const core::complex v = flip ? -buf[k] : buf[k];
            max_imag = std::max(max_imag, std::abs(v.imag()) * scale);
            f[k] = v.real() * scale;
        }
    }
    if (max_imag > 1e-10)
        throw std::runtime_error(
            "wigner_from_characteristic: imaginary residue " + std::to_string(max_imag) +
            " exceeds 1e-10");
    return out;
}

std::pair<core::RealField, core::RealField> marginals(const PhaseSpaceDensity& f) {
    core::RealField over_x(f.x_grid);
    core::RealField over_p(f.p_grid);
    const double dp = f.p_grid.dx();
    const double dx = f.x_grid.dx();
    for (std::size_t j = 0; j < f.x_grid.n; ++j) {
        const double* r = f.row(j);
        double acc = 0.0;
        for (std::size_t k = 0; k < f.p_grid.n; ++k) {
            acc += r[k];
            over_p[k] += r[k];
        }
        over_x[j] = acc * dp;
    }
    for (auto& v : over_p.samples) v *= dx;
    return {std::move(over_x), std::move(over_p)};
}

MomentCheckReport moment_expansion_check(const CharacteristicFunction& rho,
                                         const PhaseSpaceDensity& f,
                                         const core::SimUnits& units) {
    const std::size_t n = rho.dx_grid.n;
    const std::size_t l0 = n / 2;  // dx = 0
    const double ddx = rho.dx_grid.dx();
    const double hbar = units.hbar;

    // Global <p^2> sets the scale the expansion must resolve.
    double p2_global = 0.0;
    {
        double norm = 0.0;
        for (std::size_t j = 0; j < f.x_grid.n; ++j) {
            const double* r = f.row(j);
            for (std::size_t k = 0; k < f.p_grid.n; ++k) {
                const double p = f.p_grid.x(k);
                p2_global += p * p * r[k];
                norm += r[k];
            }
        }
        p2_global /= norm;
    }
    const double dx_resolve = hbar / std::sqrt(p2_global);
    std::size_t inside = 0;
    for (std::size_t l = 0; l < n; ++l)
        if (std::abs(rho.dx_grid.x(l)) <= dx_resolve) ++inside;
    if (inside < 5)
        throw std::domain_error(
            "moment_expansion_check: displacement grid resolves fewer than 5 points inside "
            "|dx| <= hbar/sqrt(<p^2>)");
    if (l0 < 2 || l0 + 2 >= n)
        throw std::domain_error("moment_expansion_check: displacement grid too small");

    MomentCheckReport rep;
    rep.mean_p_fit = core::RealField(rho.x_grid);
    rep.mean_p_direct = core::RealField(rho.x_grid);
    rep.mean_p2_fit = core::RealField(rho.x_grid);
    rep.mean_p2_direct = core::RealField(rho.x_grid);
    rep.checked.assign(rho.x_grid.n, 0);

    const double dp = f.p_grid.dx();
    for (std::size_t j = 0; j < rho.x_grid.n; ++j) {
        const core::complex* r = rho.row(j);
        const double rho0 = r[l0].real();
        if (rho0 <= 1e-6) continue;
        rep.checked[j] = 1;

        // Fourth-order central stencils in the displacement.
        const core::complex d1 = (-r[l0 + 2] + 8.0 * r[l0 + 1] - 8.0 * r[l0 - 1] + r[l0 - 2]) /
                                 (12.0 * ddx);
        const core::complex d2 = (-r[l0 + 2] + 16.0 * r[l0 + 1] - 30.0 * r[l0] +
                                  16.0 * r[l0 - 1] - r[l0 - 2]) /
                                 (12.0 * ddx * ddx);
        rep.mean_p_fit[j] = hbar * d1.imag() / rho0;
        rep.mean_p2_fit[j] = -hbar * hbar * d2.real() / rho0;

        const double* fr = f.row(j);
        double m0 = 0.0;
        double m1 = 0.0;
        double m2 = 0.0;
        for (std::size_t k = 0; k < f.p_grid.n; ++k) {
            const double p = f.p_grid.x(k);
            m0 += fr[k];
            m1 += p * fr[k];
            m2 += p * p * fr[k];
        }
        m0 *= dp;
        rep.mean_p_direct[j] = m1 * dp / m0;
        rep.mean_p2_direct[j] = m2 * dp / m0;

        rep.max_dev_mean_p =
            std::max(rep.max_dev_mean_p, std::abs(rep.mean_p_fit[j] - rep.mean_p_direct[j]));
        rep.max_dev_mean_p2 =
            std::max(rep.max_dev_mean_p2, std::abs(rep.mean_p2_fit[j] - rep.mean_p2_direct[j]));
    }
    return rep;
}

NegativityReport negativity_report(const PhaseSpaceDensity& f) {
    NegativityReport rep;
    double neg_mass = 0.0;
    double abs_mass = 0.0;
    std::size_t jm = 0;
    std::size_t km = 0;
    for (std::size_t j = 0; j < f.x_grid.n; ++j) {
        const double* r = f.row(j);
        for (std::size_t k = 0; k < f.p_grid.n; ++k) {
            const double v = r[k];
            abs_mass += std::abs(v);
            if (v < 0.0) neg_mass += -v;
            if (v < rep.min_value) {
                rep.min_value = v;
                jm = j;
                km = k;
            }
        }
    }
    rep.negative_mass_fraction = abs_mass > 0.0 ? neg_mass / abs_mass : 0.0;
    rep.x_of_min = f.x_grid.x(jm);
    rep.p_of_min = f.p_grid.x(km);
    return rep;
}

}  // namespace nwlab::phase_space
