#include "nwlab/core/potential.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nwlab::core {

namespace {

double poly_eval(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) v = v * x + c[k];
    return v;
}

double poly_deriv_eval(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) v = v * x + static_cast<double>(k) * c[k];
    return v;
}

}  // namespace

double Potential::value(double x, double mass) const {
    return std::visit(
        [&](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, FreePotential>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, HarmonicPotential>) {
                return 0.5 * mass * p.omega * p.omega * x * x;
            } else if constexpr (std::is_same_v<T, BoxPotential>) {
                return std::abs(x) >= 0.5 * p.width ? BoxPotential::wall_height : 0.0;
            } else if constexpr (std::is_same_v<T, PolynomialPotential>) {
                return poly_eval(p.coeffs, x);
            } else {
                throw std::invalid_argument(
                    "Potential: tabulated potentials have no off-grid value; use evaluate_on()");
            }
        },
        v_);
}

RealField Potential::evaluate_on(const SpatialGrid& grid, double mass) const {
    if (const auto* tab = std::get_if<TabulatedPotential>(&v_)) {
        if (tab->samples.size() != grid.n)
            throw std::invalid_argument("Potential: tabulated sample count does not match grid");
        return RealField(grid, tab->samples);
    }
    RealField out(grid);
    for (std::size_t j = 0; j < grid.n; ++j) out[j] = value(grid.x(j), mass);
    return out;
}

RealField Potential::gradient_on(const SpatialGrid& grid, double mass) const {
    RealField out(grid);
    if (const auto* tab = std::get_if<TabulatedPotential>(&v_)) {
        if (tab->samples.size() != grid.n)
            throw std::invalid_argument("Potential: tabulated sample count does not match grid");
        const double inv2dx = 1.0 / (2.0 * grid.dx());
        for (std::size_t j = 0; j < grid.n; ++j) {
            const std::size_t jm = j == 0 ? 0 : j - 1;
            const std::size_t jp = j + 1 == grid.n ? j : j + 1;
            const double h = (jp - jm) == 2 ? 1.0 : 2.0;  // one-sided at the ends
            out[j] = (tab->samples[jp] - tab->samples[jm]) * inv2dx * h;
        }
        return out;
    }
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double x = grid.x(j);
        out[j] = std::visit(
            [&](const auto& p) -> double {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, FreePotential>) {
                    return 0.0;
                } else if constexpr (std::is_same_v<T, HarmonicPotential>) {
                    return mass * p.omega * p.omega * x;
                } else if constexpr (std::is_same_v<T, BoxPotential>) {
                    return 0.0;  // flat inside; the wall is not differentiable
                } else if constexpr (std::is_same_v<T, PolynomialPotential>) {
                    return poly_deriv_eval(p.coeffs, x);
                } else {
                    return 0.0;  // unreachable, tabulated handled above
                }
            },
            v_);
    }
    return out;
}

std::string Potential::describe() const {
    std::ostringstream os;
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, FreePotential>) {
                os << "free";
            } else if constexpr (std::is_same_v<T, HarmonicPotential>) {
                os << "harmonic(omega=" << p.omega << ")";
            } else if constexpr (std::is_same_v<T, BoxPotential>) {
                os << "box(width=" << p.width << ")";
            } else if constexpr (std::is_same_v<T, PolynomialPotential>) {
                os << "polynomial(degree=" << (p.coeffs.empty() ? 0 : p.coeffs.size() - 1) << ")";
            } else {
                os << "tabulated(" << p.samples.size() << " samples)";
            }
        },
        v_);
    return os.str();
}

}  // namespace nwlab::core
