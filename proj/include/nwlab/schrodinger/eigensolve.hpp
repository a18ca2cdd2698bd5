#pragma once

#include <cstddef>
#include <vector>

#include "nwlab/schrodinger/hamiltonian.hpp"
#include "nwlab/schrodinger/wavefunction.hpp"

namespace nwlab::schrodinger {

struct Eigenstate {
    double energy = 0.0;
    WaveFunction psi;
};

/// The k lowest eigenpairs of the discretised Hamiltonian, energies
/// ascending, eigenfunctions real, L2-normalised and sign-fixed so the
/// leading (leftmost significant) lobe is positive. Requires k < n/4.
std::vector<Eigenstate> solve_eigenstates(const core::Potential& potential,
                                          const core::SpatialGrid& grid,
                                          const core::SimUnits& units, std::size_t k);

std::vector<Eigenstate> solve_eigenstates(const Hamiltonian& h, std::size_t k);

}  // namespace nwlab::schrodinger
