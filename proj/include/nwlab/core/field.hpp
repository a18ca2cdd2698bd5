#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "nwlab/core/grid.hpp"

namespace nwlab::core {

using complex = std::complex<double>;

/// Samples on a SpatialGrid plus the grid handle. Sample count always
/// equals grid.n.
template <typename T>
struct Field {
    SpatialGrid grid;
    std::vector<T> samples;

    Field() = default;
    Field(SpatialGrid g, std::vector<T> s) : grid(g), samples(std::move(s)) {
        if (samples.size() != grid.n)
            throw std::invalid_argument("Field: sample count does not match grid");
    }
    explicit Field(SpatialGrid g) : grid(g), samples(g.n, T{}) {}

    std::size_t size() const { return samples.size(); }
    T& operator[](std::size_t j) { return samples[j]; }
    const T& operator[](std::size_t j) const { return samples[j]; }
};

using RealField = Field<double>;
using ComplexField = Field<complex>;

/// Discrete L2 norm with quadrature weight dx.
double norm_l2(const RealField& f);
double norm_l2(const ComplexField& f);

/// Trapezoid-free rectangle-rule integral (the natural quadrature for a
/// periodic-convention grid): sum(samples) * dx.
double integrate(const RealField& f);

/// |f|^2 sample-wise.
RealField density_of(const ComplexField& f);

}  // namespace nwlab::core
