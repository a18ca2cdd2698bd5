#pragma once

#include <cstddef>
#include <vector>

namespace nwlab::schrodinger::detail {

/// Householder reduction of a symmetric matrix (row-major, n*n) to
/// tridiagonal form. On return `a` holds the accumulated orthogonal
/// transform Q, `d` the diagonal and `e` the subdiagonal (e[0] unused).
void tred2(std::vector<double>& a, std::size_t n, std::vector<double>& d,
           std::vector<double>& e);

/// Implicit-shift QL on a symmetric tridiagonal matrix, rotating the
/// columns of `z` (row-major, n*n) alongside. Pass identity in `z` to get
/// tridiagonal eigenvectors, or the Q from tred2 to finish a dense solve.
/// Throws on non-convergence (which reports the iteration cap).
void tqli(std::vector<double>& d, std::vector<double>& e, std::size_t n,
          std::vector<double>& z);

/// Sorts eigenvalues ascending and permutes the columns of z to match.
void sort_eigen(std::vector<double>& d, std::vector<double>& z, std::size_t n);

}  // namespace nwlab::schrodinger::detail
