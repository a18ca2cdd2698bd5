#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace nwlab::schrodinger::detail {

using complexd = std::complex<double>;

/// Dense LU with partial pivoting, factored once and reused for many
/// right-hand sides (the Crank-Nicolson stepping pattern).
template <typename T>
class DenseLu {
public:
    DenseLu() = default;
    /// a is row-major n*n and is consumed.
    DenseLu(std::vector<T> a, std::size_t n);

    void solve(T* b) const;  // in place
    std::size_t size() const { return n_; }

private:
    std::size_t n_ = 0;
    std::vector<T> lu_;
    std::vector<std::size_t> piv_;
};

/// Thomas solve for a diagonally dominant tridiagonal system
/// (diag, lower == upper by symmetry scaling is NOT assumed: lower[i]
/// couples row i to i-1, upper[i] couples row i to i+1).
template <typename T>
void tridiag_solve(const std::vector<T>& lower, const std::vector<T>& diag,
                   const std::vector<T>& upper, T* b, std::size_t n);

}  // namespace nwlab::schrodinger::detail
