#pragma once

#include <string>
#include <vector>

#include "nwlab/core/grid.hpp"
#include "nwlab/core/units.hpp"
#include "nwlab/phase_space/wigner.hpp"
#include "nwlab/schrodinger/wavefunction.hpp"

namespace nwlab::phase_space {

/// Phase-space amplitude phi(x, p) whose momentum autocorrelation
/// rebuilds F. The transform constants are a convention (the defining
/// relations leave them open), so the tag records the exact choice.
struct PhaseSpaceAmplitude {
    std::vector<core::complex> values;  // x-major: values[j * p_grid.n + k]
    core::SpatialGrid x_grid;
    core::SpatialGrid p_grid;
    std::string convention;

    core::complex at(std::size_t j, std::size_t k) const {
        return values[j * p_grid.n + k];
    }
    const core::complex* row(std::size_t j) const { return values.data() + j * p_grid.n; }
};

/// phi(x, p) = (4 pi hbar)^{-1} integral psi(x + dx/2) e^{-i p dx / 2hbar} d(dx),
/// with the displacement grid mirroring the x grid and the momentum grid
/// equal to the Wigner p grid (half-kernel transform, evaluated by a
/// length-2n FFT). Inverse relation: psi(x + dx/2) = integral
/// e^{+i p dx / 2hbar} phi(x, p) dp.
PhaseSpaceAmplitude phase_space_amplitude(const schrodinger::WaveFunction& psi,
                                          const core::SimUnits& units);

/// Reconstructs psi(x + shift) from the amplitude via the inverse
/// relation; shift = 0 recovers psi itself. Used by the round-trip
/// checks.
core::ComplexField reconstruct_shifted(const PhaseSpaceAmplitude& phi, double shift,
                                       const core::SimUnits& units);

/// F(x, p) = 2 integral phi*(x, 2p - p') phi(x, p') dp' (direct
/// correlation sum per x; independent of the characteristic-function
/// route). The prefactor 2 belongs to the recorded convention.
PhaseSpaceDensity density_from_amplitudes(const PhaseSpaceAmplitude& phi);

}  // namespace nwlab::phase_space
