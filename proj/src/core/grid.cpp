#include "nwlab/core/grid.hpp"

#include <stdexcept>
#include <string>

namespace nwlab::core {

bool is_power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

SpatialGrid make_grid(double x_min, double x_max, std::size_t n) {
    if (!(x_max > x_min))
        throw std::domain_error("make_grid: x_max must exceed x_min");
    if (n < 8 || !is_power_of_two(n))
        throw std::domain_error("make_grid: n must be a power of two >= 8, got " +
                                std::to_string(n));
    return SpatialGrid{x_min, x_max, n};
}

}  // namespace nwlab::core
