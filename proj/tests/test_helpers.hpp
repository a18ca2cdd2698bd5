#pragma once

// Shared analytic oracles for the test suites. Everything here is
// textbook closed-form material (Gaussian integrals, Hermite functions,
// Ornstein-Uhlenbeck laws) evaluated independently of the library code
// paths under test.

#include <cmath>
#include <numbers>
#include <vector>

#include "nwlab/core/field.hpp"
#include "nwlab/core/grid.hpp"

namespace oracle {

inline constexpr double pi = std::numbers::pi;

/// Harmonic-oscillator eigenfunction psi_n for hbar = m = omega = 1:
/// psi_n(x) = (2^n n! sqrt(pi))^{-1/2} H_n(x) exp(-x^2/2).
inline double hermite_function(unsigned n, double x) {
    double h_prev = 1.0;
    double h = 2.0 * x;
    if (n == 0) h = h_prev;
    for (unsigned k = 1; k < n; ++k) {
        const double h_next = 2.0 * x * h - 2.0 * static_cast<double>(k) * h_prev;
        h_prev = h;
        h = h_next;
    }
    double log_norm = 0.25 * std::log(pi);
    for (unsigned k = 1; k <= n; ++k) log_norm += 0.5 * std::log(2.0 * static_cast<double>(k));
    return h * std::exp(-0.5 * x * x - log_norm);
}

/// Wigner function of the n-th oscillator state (hbar = m = omega = 1):
/// F_n(x,p) = ((-1)^n / pi) L_n(2(x^2+p^2)) exp(-(x^2+p^2)).
inline double wigner_oscillator(unsigned n, double x, double p) {
    const double z = 2.0 * (x * x + p * p);
    double l_prev = 1.0;
    double l = 1.0 - z;
    if (n == 0) l = l_prev;
    for (unsigned k = 1; k < n; ++k) {
        const double kk = static_cast<double>(k);
        const double l_next = ((2.0 * kk + 1.0 - z) * l - kk * l_prev) / (kk + 1.0);
        l_prev = l;
        l = l_next;
    }
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return sign / pi * l * std::exp(-0.5 * z);
}

/// Ground-state density exp(-x^2)/sqrt(pi) sampled on a grid.
inline nwlab::core::RealField oscillator_density(const nwlab::core::SpatialGrid& grid) {
    nwlab::core::RealField rho(grid);
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double x = grid.x(j);
        rho[j] = std::exp(-x * x) / std::sqrt(pi);
    }
    return rho;
}

/// Sample mean and variance.
struct Moments {
    double mean = 0.0;
    double var = 0.0;
};

inline Moments moments(const std::vector<double>& xs) {
    double m = 0.0;
    for (double x : xs) m += x;
    m /= static_cast<double>(xs.size());
    double v = 0.0;
    for (double x : xs) v += (x - m) * (x - m);
    v /= static_cast<double>(xs.size());
    return {m, v};
}

}  // namespace oracle
