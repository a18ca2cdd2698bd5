#pragma once

#include <cstddef>
#include <vector>

namespace nwlab::core {

/// Uniform 1D grid with power-of-two point count. Points are
/// x_j = x_min + j*dx, j = 0..n-1; x_max itself is not a sample
/// (periodic convention shared with the FFT).
struct SpatialGrid {
    double x_min = 0.0;
    double x_max = 0.0;
    std::size_t n = 0;

    double dx() const { return (x_max - x_min) / static_cast<double>(n); }
    double x(std::size_t j) const { return x_min + static_cast<double>(j) * dx(); }
    double span() const { return x_max - x_min; }

    std::vector<double> points() const {
        std::vector<double> xs(n);
        for (std::size_t j = 0; j < n; ++j) xs[j] = x(j);
        return xs;
    }

    bool operator==(const SpatialGrid&) const = default;
};

/// Validating constructor: x_max > x_min, n a power of two, n >= 8.
SpatialGrid make_grid(double x_min, double x_max, std::size_t n);

bool is_power_of_two(std::size_t n);

}  // namespace nwlab::core
