#include "nwlab/schrodinger/hamiltonian.hpp"

#include <cmath>
#include <numbers>

namespace nwlab::schrodinger {

Hamiltonian::Hamiltonian(const core::Potential& potential, const core::SpatialGrid& grid,
                         const core::SimUnits& units)
    : grid_(grid), units_(units) {
    const std::size_t n = grid.n;
    const double dx = grid.dx();
    const double kin = units.hbar * units.hbar / (2.0 * units.mass * dx * dx);
    const core::RealField v = potential.evaluate_on(grid, units.mass);

    if (potential.is_hard_wall()) {
        tridiagonal_ = true;
        diag_.resize(n);
        subdiag_.assign(n, 0.0);
        for (std::size_t j = 0; j < n; ++j) diag_[j] = 2.0 * kin + v[j];
        for (std::size_t j = 1; j < n; ++j) subdiag_[j] = -kin;
        return;
    }

    // Infinite-grid sinc-DVR kinetic matrix:
    //   T_jj = (hbar^2 / 2m dx^2) * pi^2/3,
    //   T_jk = (hbar^2 / 2m dx^2) * 2 (-1)^(j-k) / (j-k)^2.
    dense_.assign(n * n, 0.0);
    const double t_diag = kin * std::numbers::pi * std::numbers::pi / 3.0;
    for (std::size_t j = 0; j < n; ++j) {
        dense_[j * n + j] = t_diag + v[j];
        for (std::size_t k = 0; k < j; ++k) {
            const std::size_t m = j - k;
            const double sign = (m % 2 == 0) ? 1.0 : -1.0;
            const double t = kin * 2.0 * sign / (static_cast<double>(m) * static_cast<double>(m));
            dense_[j * n + k] = t;
            dense_[k * n + j] = t;
        }
    }
}

void Hamiltonian::apply(const double* in, double* out) const {
    const std::size_t n = grid_.n;
    if (tridiagonal_) {
        for (std::size_t j = 0; j < n; ++j) {
            double acc = diag_[j] * in[j];
            if (j > 0) acc += subdiag_[j] * in[j - 1];
            if (j + 1 < n) acc += subdiag_[j + 1] * in[j + 1];
            out[j] = acc;
        }
        return;
    }
    for (std::size_t j = 0; j < n; ++j) {
        const double* row = dense_.data() + j * n;
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) acc += row[k] * in[k];
        out[j] = acc;
    }
}

void Hamiltonian::apply(const core::complex* in, core::complex* out) const {
    const std::size_t n = grid_.n;
    std::vector<double> re(n);
    std::vector<double> im(n);
    for (std::size_t j = 0; j < n; ++j) {
        re[j] = in[j].real();
        im[j] = in[j].imag();
    }
    std::vector<double> re_out(n);
    std::vector<double> im_out(n);
    apply(re.data(), re_out.data());
    apply(im.data(), im_out.data());
    for (std::size_t j = 0; j < n; ++j) out[j] = core::complex(re_out[j], im_out[j]);
}

}  // namespace nwlab::schrodinger
