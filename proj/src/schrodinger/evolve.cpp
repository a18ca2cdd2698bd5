#include "nwlab/schrodinger/evolve.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <variant>

#include "linalg.hpp"

namespace nwlab::schrodinger {

using detail::complexd;

namespace {

void check_dt_against_potential(const core::Potential& potential, double dt) {
    if (!(dt > 0.0)) throw std::domain_error("evolver: dt must be positive");
    if (const auto* h = std::get_if<core::HarmonicPotential>(&potential.raw())) {
        const double period = 2.0 * std::numbers::pi / h->omega;
        if (dt > 0.1 * period)
            throw std::domain_error("evolver: dt exceeds a tenth of the oscillator period");
    }
}

}  // namespace

struct UnitaryEvolver::Impl {
    Hamiltonian h;
    double dt;
    double lambda;  // dt / (2 hbar)

    // Tridiagonal path: Thomas factors of A+ = I + i lambda H.
    std::vector<complexd> lower, diag, upper;
    // Dense path: LU of A+.
    detail::DenseLu<complexd> lu;

    Impl(const core::Potential& potential, const core::SpatialGrid& grid,
         const core::SimUnits& units, double dt_)
        : h(potential, grid, units), dt(dt_), lambda(dt_ / (2.0 * units.hbar)) {
        const std::size_t n = grid.n;
        if (h.tridiagonal()) {
            lower.assign(n, 0.0);
            diag.assign(n, 0.0);
            upper.assign(n, 0.0);
            for (std::size_t j = 0; j < n; ++j)
                diag[j] = complexd(1.0, lambda * h.diag()[j]);
            for (std::size_t j = 1; j < n; ++j) {
                lower[j] = complexd(0.0, lambda * h.subdiag()[j]);
                upper[j - 1] = lower[j];
            }
        } else {
            std::vector<complexd> a(n * n);
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t c = 0; c < n; ++c)
                    a[r * n + c] = complexd(r == c ? 1.0 : 0.0, lambda * h.dense()[r * n + c]);
            lu = detail::DenseLu<complexd>(std::move(a), n);
        }
    }

    void step(std::vector<complexd>& psi, std::vector<core::complex>& hpsi) const {
        const std::size_t n = psi.size();
        // rhs = (I - i lambda H) psi = psi - i lambda (H psi)
        h.apply(psi.data(), hpsi.data());
        for (std::size_t j = 0; j < n; ++j)
            psi[j] -= complexd(0.0, lambda) * hpsi[j];
        if (h.tridiagonal())
            detail::tridiag_solve(lower, diag, upper, psi.data(), n);
        else
            lu.solve(psi.data());
    }
};

UnitaryEvolver::UnitaryEvolver(const core::Potential& potential, const core::SpatialGrid& grid,
                               const core::SimUnits& units, double dt) {
    check_dt_against_potential(potential, dt);
    impl_ = std::make_unique<Impl>(potential, grid, units, dt);
}

UnitaryEvolver::~UnitaryEvolver() = default;
UnitaryEvolver::UnitaryEvolver(UnitaryEvolver&&) noexcept = default;

double UnitaryEvolver::dt() const { return impl_->dt; }
const Hamiltonian& UnitaryEvolver::hamiltonian() const { return impl_->h; }

WaveFunction UnitaryEvolver::advance(const WaveFunction& psi, std::size_t steps) const {
    const std::size_t n = psi.field.size();
    if (n != impl_->h.grid().n)
        throw std::invalid_argument("UnitaryEvolver: grid mismatch");
    std::vector<complexd> work(psi.field.samples.begin(), psi.field.samples.end());
    std::vector<core::complex> hpsi(n);
    for (std::size_t s = 0; s < steps; ++s) impl_->step(work, hpsi);
    core::ComplexField out(psi.field.grid, std::vector<core::complex>(work.begin(), work.end()));
    return WaveFunction{std::move(out), psi.time + static_cast<double>(steps) * impl_->dt};
}

struct ParabolicEvolver::Impl {
    Hamiltonian h;
    double dtau;
    double mu;  // dtau / hbar

    std::vector<double> lower, diag, upper;
    detail::DenseLu<double> lu;

    Impl(const core::Potential& potential, const core::SpatialGrid& grid,
         const core::SimUnits& units, double dtau_)
        : h(potential, grid, units), dtau(dtau_), mu(dtau_ / units.hbar) {
        const std::size_t n = grid.n;
        if (h.tridiagonal()) {
            lower.assign(n, 0.0);
            diag.assign(n, 0.0);
            upper.assign(n, 0.0);
            for (std::size_t j = 0; j < n; ++j) diag[j] = 1.0 + mu * h.diag()[j];
            for (std::size_t j = 1; j < n; ++j) {
                lower[j] = mu * h.subdiag()[j];
                upper[j - 1] = lower[j];
            }
        } else {
            std::vector<double> a(n * n);
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t c = 0; c < n; ++c)
                    a[r * n + c] = (r == c ? 1.0 : 0.0) + mu * h.dense()[r * n + c];
            lu = detail::DenseLu<double>(std::move(a), n);
        }
    }

    void step(std::vector<double>& psi) const {
        if (h.tridiagonal())
            detail::tridiag_solve(lower, diag, upper, psi.data(), psi.size());
        else
            lu.solve(psi.data());
    }
};

ParabolicEvolver::ParabolicEvolver(const core::Potential& potential,
                                   const core::SpatialGrid& grid, const core::SimUnits& units,
                                   double dtau) {
    if (!(dtau > 0.0)) throw std::domain_error("ParabolicEvolver: dtau must be positive");
    impl_ = std::make_unique<Impl>(potential, grid, units, dtau);
}

ParabolicEvolver::~ParabolicEvolver() = default;
ParabolicEvolver::ParabolicEvolver(ParabolicEvolver&&) noexcept = default;

WaveFunction ParabolicEvolver::advance(const WaveFunction& psi, std::size_t steps,
                                       bool renormalize) const {
    const std::size_t n = psi.field.size();
    if (n != impl_->h.grid().n)
        throw std::invalid_argument("ParabolicEvolver: grid mismatch");
    std::vector<double> work(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(psi.field[j].imag()) >= 1e-12)
            throw std::domain_error("ParabolicEvolver: input must be real-valued");
        work[j] = psi.field[j].real();
    }
    const double dx = psi.field.grid.dx();
    auto norm_of = [&](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x * x;
        return std::sqrt(s * dx);
    };
    const double norm0 = norm_of(work);

    for (std::size_t s = 0; s < steps; ++s) {
        impl_->step(work);
        if (renormalize) {
            const double nrm = norm_of(work);
            if (nrm == 0.0) throw std::runtime_error("ParabolicEvolver: flow annihilated state");
            for (double& x : work) x /= nrm;
        } else if (norm_of(work) > 1e6 * norm0) {
            throw std::runtime_error("ParabolicEvolver: divergence detected at step " +
                                     std::to_string(s));
        }
    }
    core::ComplexField out(psi.field.grid);
    for (std::size_t j = 0; j < n; ++j) out[j] = work[j];
    return WaveFunction{std::move(out), psi.time + static_cast<double>(steps) * impl_->dtau};
}

WaveFunction evolve_unitary(const WaveFunction& psi, const core::Potential& potential,
                            const core::SimUnits& units, double dt, std::size_t steps) {
    return UnitaryEvolver(potential, psi.grid(), units, dt).advance(psi, steps);
}

WaveFunction evolve_parabolic(const WaveFunction& psi, const core::Potential& potential,
                              const core::SimUnits& units, double dtau, std::size_t steps,
                              bool renormalize) {
    return ParabolicEvolver(potential, psi.grid(), units, dtau).advance(psi, steps, renormalize);
}

}  // namespace nwlab::schrodinger
