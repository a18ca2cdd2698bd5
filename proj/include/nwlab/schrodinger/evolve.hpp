#pragma once

#include <memory>

#include "nwlab/schrodinger/hamiltonian.hpp"
#include "nwlab/schrodinger/wavefunction.hpp"

namespace nwlab::schrodinger {

/// Crank-Nicolson propagator for i hbar dpsi/dt = H psi. The Cayley form
/// (I + i dt H / 2hbar) psi' = (I - i dt H / 2hbar) psi is exactly
/// unitary for symmetric H, so the norm is preserved to roundoff. The
/// half-step matrix is factored once per evolver, so batching steps
/// through one instance is cheap.
class UnitaryEvolver {
public:
    UnitaryEvolver(const core::Potential& potential, const core::SpatialGrid& grid,
                   const core::SimUnits& units, double dt);
    ~UnitaryEvolver();
    UnitaryEvolver(UnitaryEvolver&&) noexcept;

    WaveFunction advance(const WaveFunction& psi, std::size_t steps) const;
    double dt() const;
    const Hamiltonian& hamiltonian() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Decaying branch of the parabolic pair: hbar dpsi/dtau = -H psi,
/// integrated by implicit Euler. With renormalisation the iterate
/// converges to the ground state of H; without it the norm decays
/// whenever the spectrum is positive.
class ParabolicEvolver {
public:
    ParabolicEvolver(const core::Potential& potential, const core::SpatialGrid& grid,
                     const core::SimUnits& units, double dtau);
    ~ParabolicEvolver();
    ParabolicEvolver(ParabolicEvolver&&) noexcept;

    /// Requires a real-valued input (max |Im psi| < 1e-12). Throws
    /// std::runtime_error on divergence (norm growth beyond 1e6 with
    /// renormalisation off).
    WaveFunction advance(const WaveFunction& psi, std::size_t steps, bool renormalize) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// One-shot conveniences matching the operation signatures.
WaveFunction evolve_unitary(const WaveFunction& psi, const core::Potential& potential,
                            const core::SimUnits& units, double dt, std::size_t steps);

WaveFunction evolve_parabolic(const WaveFunction& psi, const core::Potential& potential,
                              const core::SimUnits& units, double dtau, std::size_t steps,
                              bool renormalize);

}  // namespace nwlab::schrodinger
