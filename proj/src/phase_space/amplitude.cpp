#include "nwlab/phase_space/amplitude.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nwlab/core/fft.hpp"

namespace nwlab::phase_space {

namespace {

constexpr double pi = std::numbers::pi;

// psi(x_j + s) for every j, with positions outside the sampled domain
// set to zero instead of the periodic wrap (a contained state has
// decayed there; the wrap value belongs to the other edge).
core::ComplexField shifted_unwrapped(const core::ComplexField& psi, double s) {
    const auto& g = psi.grid;
    const double span = g.span();
    double s_wrapped = std::remainder(s, span);
    core::ComplexField out =
        (s_wrapped == 0.0) ? psi : core::fourier_shift(psi, s_wrapped);
    const double hi = g.x_min + span;
    for (std::size_t j = 0; j < g.n; ++j) {
        const double pos = g.x(j) + s;
        if (pos < g.x_min || pos >= hi) out[j] = 0.0;
    }
    return out;
}

}  // namespace

PhaseSpaceAmplitude phase_space_amplitude(const schrodinger::WaveFunction& psi,
                                          const core::SimUnits& units) {
    if (std::abs(core::norm_l2(psi.field) - 1.0) > 1e-6)
        throw std::domain_error("phase_space_amplitude: psi must be normalised");
    const auto& xg = psi.grid();
    const std::size_t n = xg.n;
    const double span = xg.span();

    // Displacement window [-2 span, 2 span): wide enough that
    // psi(x + dx/2) runs off both domain ends for every x, which makes
    // phi genuinely band-limited. Its half-kernel conjugate grid then has
    // spacing dp/2 (half the Wigner spacing) -- the resolution needed for
    // the momentum autocorrelation to hold across the whole x domain.
    const std::size_t n4 = 4 * n;
    const core::SpatialGrid dx_grid{-2.0 * span, 2.0 * span, n4};
    const double ddx = dx_grid.dx();

    const core::SpatialGrid wigner_p =
        core::momentum_grid(core::SpatialGrid{-0.5 * span, 0.5 * span, n}, units);
    const double dp_f = 0.5 * wigner_p.dx();
    const std::size_t np = 2 * n;  // fine bins covering the same p range
    const core::SpatialGrid p_grid{-static_cast<double>(np / 2) * dp_f,
                                   static_cast<double>(np / 2) * dp_f, np};

    PhaseSpaceAmplitude out;
    out.x_grid = xg;
    out.p_grid = p_grid;
    out.values.resize(n * np);
    out.convention =
        "phi(x,p) = (4 pi hbar)^-1 * sum_dx psi(x+dx/2) exp(-i p dx / (2 hbar)) ddx over "
        "dx in [-2L, 2L); inverse kernel exp(+i p dx / (2 hbar)) dp; autocorrelation prefactor 2; "
        "p grid at half the Wigner spacing";

    std::vector<core::ComplexField> shifted;
    shifted.reserve(n4);
    for (std::size_t l = 0; l < n4; ++l)
        shifted.push_back(shifted_unwrapped(psi.field, 0.5 * dx_grid.x(l)));

    // phi(k) = scale * (-1)^K * DFT4n_K[g_l], K = k - np/2 (centre factor
    // from dx_l = (l - n4/2) ddx: exp(i 2 pi K (n4/2) / n4) = (-1)^K).
    core::FftPlan plan(n4);
    const double scale = ddx / (4.0 * pi * units.hbar);
    std::vector<core::complex> buf(n4);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t l = 0; l < n4; ++l) buf[l] = shifted[l][j];
        plan.forward(buf);
        for (std::size_t k = 0; k < np; ++k) {
            const auto bigk =
                static_cast<std::ptrdiff_t>(k) - static_cast<std::ptrdiff_t>(np / 2);
            const std::size_t idx =
                bigk >= 0 ? static_cast<std::size_t>(bigk)
                          : static_cast<std::size_t>(bigk + static_cast<std::ptrdiff_t>(n4));
            const double sign = (bigk % 2 == 0) ? 1.0 : -1.0;
            out.values[j * np + k] = buf[idx] * (sign * scale);
        }
    }
    return out;
}

core::ComplexField reconstruct_shifted(const PhaseSpaceAmplitude& phi, double shift,
                                       const core::SimUnits& units) {
    const std::size_t n = phi.x_grid.n;
    const double dp = phi.p_grid.dx();
    core::ComplexField out(phi.x_grid);
    for (std::size_t j = 0; j < n; ++j) {
        const core::complex* r = phi.row(j);
        core::complex acc = 0.0;
        for (std::size_t k = 0; k < phi.p_grid.n; ++k) {
            // inverse kernel exp(+i p dx / (2 hbar)) at dx = 2 * shift
            const double ang = phi.p_grid.x(k) * shift / units.hbar;
            acc += r[k] * core::complex(std::cos(ang), std::sin(ang));
        }
        out[j] = acc * dp;
    }
    return out;
}

PhaseSpaceDensity density_from_amplitudes(const PhaseSpaceAmplitude& phi) {
    const std::size_t np = phi.p_grid.n;  // fine grid, 2n bins
    const std::size_t n = np / 2;         // Wigner bins
    if (phi.x_grid.n == 0 || np == 0)
        throw std::invalid_argument("density_from_amplitudes: empty amplitude");

    PhaseSpaceDensity out;
    out.x_grid = phi.x_grid;
    const double dp_f = phi.p_grid.dx();
    const double dp = 2.0 * dp_f;
    out.p_grid = core::SpatialGrid{-static_cast<double>(n / 2) * dp,
                                   static_cast<double>(n / 2) * dp, n};
    out.values.assign(phi.x_grid.n * n, 0.0);

    for (std::size_t j = 0; j < phi.x_grid.n; ++j) {
        const core::complex* r = phi.row(j);
        double* f = out.row(j);
        for (std::size_t k = 0; k < n; ++k) {
            // fine-grid index of 2 p_k - p'_m is m_a = 4k - m
            const auto kk = static_cast<std::ptrdiff_t>(k);
            const std::ptrdiff_t offset = 4 * kk;
            core::complex acc = 0.0;
            const std::ptrdiff_t m_lo =
                std::max<std::ptrdiff_t>(0, offset - (static_cast<std::ptrdiff_t>(np) - 1));
            const std::ptrdiff_t m_hi =
                std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(np) - 1, offset);
            for (std::ptrdiff_t m = m_lo; m <= m_hi; ++m) {
                const std::ptrdiff_t ma = offset - m;
                acc += std::conj(r[static_cast<std::size_t>(ma)]) *
                       r[static_cast<std::size_t>(m)];
            }
            f[k] = 2.0 * acc.real() * dp_f;
        }
    }
    return out;
}

}  // namespace nwlab::phase_space
