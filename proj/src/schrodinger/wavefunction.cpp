#include "nwlab/schrodinger/wavefunction.hpp"

#include <cmath>
#include <stdexcept>

namespace nwlab::schrodinger {

void normalize(core::ComplexField& field) {
    const double nrm = core::norm_l2(field);
    if (nrm == 0.0) throw std::domain_error("normalize: zero field");
    const double inv = 1.0 / nrm;
    for (auto& v : field.samples) v *= inv;
}

WaveFunction gaussian_packet(const core::SpatialGrid& grid, double x0, double sigma,
                             double k0) {
    if (sigma <= 0.0) throw std::domain_error("gaussian_packet: sigma must be positive");
    core::ComplexField f(grid);
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double x = grid.x(j);
        const double arg = -(x - x0) * (x - x0) / (4.0 * sigma * sigma);
        const double phase = k0 * x;
        f[j] = std::exp(arg) * core::complex(std::cos(phase), std::sin(phase));
    }
    normalize(f);
    return WaveFunction{std::move(f), 0.0};
}

double max_abs_difference(const core::ComplexField& a, const core::ComplexField& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("max_abs_difference: size mismatch");
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}

}  // namespace nwlab::schrodinger
