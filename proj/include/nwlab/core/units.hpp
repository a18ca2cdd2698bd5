#pragma once

#include <stdexcept>

namespace nwlab::core {

/// Physical constants of a run. The diffusion scale d0 = hbar/(2 m) is
/// always derived, never stored, so it cannot drift out of sync.
struct SimUnits {
    double hbar = 1.0;
    double mass = 1.0;

    SimUnits() = default;
    SimUnits(double hbar_, double mass_) : hbar(hbar_), mass(mass_) {
        if (hbar <= 0.0 || mass <= 0.0)
            throw std::invalid_argument("SimUnits: hbar and mass must be positive");
    }

    /// Diffusion constant of the stochastic process, hbar / (2 m).
    double d0() const { return hbar / (2.0 * mass); }
};

}  // namespace nwlab::core
