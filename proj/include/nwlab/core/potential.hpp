#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "nwlab/core/field.hpp"
#include "nwlab/core/grid.hpp"

namespace nwlab::core {

struct FreePotential {};

struct HarmonicPotential {
    double omega = 1.0;
};

/// Hard box of the given width centred at x = 0. Walls are realised as a
/// large constant (wall_height) for |x| >= width/2; align width/2 with a
/// grid node for clean Dirichlet behaviour.
struct BoxPotential {
    double width = 1.0;
    static constexpr double wall_height = 1e9;
};

/// V(x) = sum_k coeffs[k] * x^k.
struct PolynomialPotential {
    std::vector<double> coeffs;
};

/// Samples on a grid; length must match the grid the potential is used on.
struct TabulatedPotential {
    std::vector<double> samples;
};

class Potential {
public:
    using Variant = std::variant<FreePotential, HarmonicPotential, BoxPotential,
                                 PolynomialPotential, TabulatedPotential>;

    Potential() : v_(FreePotential{}) {}
    Potential(Variant v) : v_(std::move(v)) {}

    static Potential free() { return Potential(FreePotential{}); }
    static Potential harmonic(double omega) { return Potential(HarmonicPotential{omega}); }
    static Potential box(double width) { return Potential(BoxPotential{width}); }
    static Potential polynomial(std::vector<double> coeffs) {
        return Potential(PolynomialPotential{std::move(coeffs)});
    }
    static Potential tabulated(std::vector<double> samples) {
        return Potential(TabulatedPotential{std::move(samples)});
    }

    /// Value at x with mass m (harmonic uses V = m w^2 x^2 / 2). Tabulated
    /// potentials cannot be evaluated off-grid and must go through
    /// evaluate_on().
    double value(double x, double mass) const;

    /// dV/dx; analytic for every closed-form variant, centred differences
    /// for tabulated samples.
    RealField gradient_on(const SpatialGrid& grid, double mass) const;

    RealField evaluate_on(const SpatialGrid& grid, double mass) const;

    bool is_hard_wall() const { return std::holds_alternative<BoxPotential>(v_); }
    const Variant& raw() const { return v_; }
    std::string describe() const;

private:
    Variant v_;
};

}  // namespace nwlab::core
