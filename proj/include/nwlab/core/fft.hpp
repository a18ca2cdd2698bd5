#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "nwlab/core/field.hpp"
#include "nwlab/core/grid.hpp"
#include "nwlab/core/units.hpp"

namespace nwlab::core {

/// Iterative radix-2 complex FFT for power-of-two sizes. Forward uses
/// kernel exp(-2*pi*i*jk/n) and is unnormalised; inverse divides by n.
/// Twiddles are precomputed per plan so repeated transforms of the same
/// size are cheap and the operation order is fixed (deterministic).
class FftPlan {
public:
    explicit FftPlan(std::size_t n);

    std::size_t size() const { return n_; }
    void forward(complex* data) const;
    void inverse(complex* data) const;

    void forward(std::vector<complex>& data) const { forward(data.data()); }
    void inverse(std::vector<complex>& data) const { inverse(data.data()); }

private:
    void transform(complex* data, bool invert) const;

    std::size_t n_;
    std::vector<std::size_t> bitrev_;
    std::vector<complex> twiddle_;  // forward twiddles, stage-major
};

/// Momentum grid conjugate to a spatial grid: n points, spacing
/// dp = 2*pi*hbar/(n*dx), centred so p = 0 is at index n/2.
SpatialGrid momentum_grid(const SpatialGrid& x_grid, const SimUnits& units);

/// psi~(p) = (2*pi*hbar)^{-1/2} * integral psi(x) exp(-i p x / hbar) dx,
/// discretised by FFT, returned on momentum_grid() in ascending-p order.
/// Preserves the L2 norm (Parseval holds exactly for this convention).
ComplexField momentum_representation(const ComplexField& psi, const SimUnits& units);

/// Inverse of momentum_representation.
ComplexField position_representation(const ComplexField& psi_p, const SpatialGrid& x_grid,
                                     const SimUnits& units);

/// Spectral derivative d/dx on a periodic grid.
RealField spectral_derivative(const RealField& f);
ComplexField spectral_derivative(const ComplexField& f);

/// Band-limited evaluation of f(x + shift) on the same grid (periodic).
ComplexField fourier_shift(const ComplexField& f, double shift);

}  // namespace nwlab::core
