#pragma once

#include <cstdint>
#include <vector>

#include "nwlab/core/field.hpp"
#include "nwlab/core/units.hpp"
#include "nwlab/schrodinger/wavefunction.hpp"

namespace nwlab::schrodinger {

/// psi = exp(R + iS): log-amplitude R, unwrapped phase S, and the node
/// mask marking points whose density sits below the node threshold
/// (where R and the osmotic quantities lose meaning).
struct PolarFields {
    core::RealField r;
    core::RealField s;
    std::vector<std::uint8_t> node_mask;  // 1 = masked
    double threshold_used = 0.0;          // absolute density threshold

    bool masked(std::size_t j) const { return node_mask[j] != 0; }
};

/// node_threshold is an absolute density; pass a negative value (the
/// default) for the standard 1e-8 * max(rho). The phase is unwrapped
/// left to right within each contiguous unmasked segment, pinned to
/// arg psi at the segment's leftmost point. Throws if everything is
/// below threshold.
PolarFields polar_decompose(const WaveFunction& psi, double node_threshold = -1.0);

/// Systematic velocity v = 2 D0 grad(S) and osmotic velocity
/// u = 2 D0 grad(R), centred differences inside unmasked segments,
/// one-sided at segment ends. Masked points carry v = u = 0 and stay
/// masked; isolated single-point segments are masked too.
struct VelocityFields {
    core::RealField v;
    core::RealField u;
    std::vector<std::uint8_t> node_mask;

    bool masked(std::size_t j) const { return node_mask[j] != 0; }
};

VelocityFields drift_fields(const PolarFields& polar, const core::SimUnits& units);

}  // namespace nwlab::schrodinger
