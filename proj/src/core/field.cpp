#include "nwlab/core/field.hpp"

#include <cmath>

namespace nwlab::core {

double norm_l2(const RealField& f) {
    double s = 0.0;
    for (double v : f.samples) s += v * v;
    return std::sqrt(s * f.grid.dx());
}

double norm_l2(const ComplexField& f) {
    double s = 0.0;
    for (const complex& v : f.samples) s += std::norm(v);
    return std::sqrt(s * f.grid.dx());
}

double integrate(const RealField& f) {
    double s = 0.0;
    for (double v : f.samples) s += v;
    return s * f.grid.dx();
}

RealField density_of(const ComplexField& f) {
    RealField rho(f.grid);
    for (std::size_t j = 0; j < f.size(); ++j) rho[j] = std::norm(f[j]);
    return rho;
}

}  // namespace nwlab::core
