#include "nwlab/core/fft.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "nwlab/core/warnings.hpp"

namespace nwlab::core {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

// The transform helpers below run thousands of same-size FFTs per
// analysis; plans are cached per thread.
const FftPlan& cached_plan(std::size_t n) {
    thread_local std::map<std::size_t, FftPlan> plans;
    auto it = plans.find(n);
    if (it == plans.end()) it = plans.emplace(n, FftPlan(n)).first;
    return it->second;
}

}  // namespace

FftPlan::FftPlan(std::size_t n) : n_(n) {
    if (!is_power_of_two(n))
        throw std::invalid_argument("FftPlan: size must be a power of two");
    bitrev_.resize(n);
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0;
        for (std::size_t b = 0; b < bits; ++b)
            if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
        bitrev_[i] = r;
    }
    // Stage-major twiddle table: for each stage of half-length h,
    // w[t] = exp(-2*pi*i*t/(2h)), t = 0..h-1.
    twiddle_.reserve(n > 1 ? n - 1 : 0);
    for (std::size_t h = 1; h < n; h *= 2) {
        for (std::size_t t = 0; t < h; ++t) {
            const double ang = -two_pi * static_cast<double>(t) / static_cast<double>(2 * h);
            twiddle_.emplace_back(std::cos(ang), std::sin(ang));
        }
    }
}

void FftPlan::transform(complex* a, bool invert) const {
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t r = bitrev_[i];
        if (i < r) std::swap(a[i], a[r]);
    }
    std::size_t tw_base = 0;
    for (std::size_t h = 1; h < n_; h *= 2) {
        for (std::size_t start = 0; start < n_; start += 2 * h) {
            for (std::size_t t = 0; t < h; ++t) {
                complex w = twiddle_[tw_base + t];
                if (invert) w = std::conj(w);
                const complex u = a[start + t];
                const complex v = a[start + t + h] * w;
                a[start + t] = u + v;
                a[start + t + h] = u - v;
            }
        }
        tw_base += h;
    }
    if (invert) {
        const double inv_n = 1.0 / static_cast<double>(n_);
        for (std::size_t i = 0; i < n_; ++i) a[i] *= inv_n;
    }
}

void FftPlan::forward(complex* data) const { transform(data, false); }
void FftPlan::inverse(complex* data) const { transform(data, true); }

SpatialGrid momentum_grid(const SpatialGrid& x_grid, const SimUnits& units) {
    const double dp = two_pi * units.hbar / (static_cast<double>(x_grid.n) * x_grid.dx());
    const double half = static_cast<double>(x_grid.n / 2) * dp;
    return SpatialGrid{-half, half, x_grid.n};
}

ComplexField momentum_representation(const ComplexField& psi, const SimUnits& units) {
    const std::size_t n = psi.size();
    const SpatialGrid pg = momentum_grid(psi.grid, units);
    {
        std::vector<double> rho(n);
        for (std::size_t j = 0; j < n; ++j) rho[j] = std::norm(psi[j]);
        warnings::check_edge_decay(rho, "momentum_representation");
    }
    FftPlan plan(n);

    // exp(-i p_k x_j / hbar) = exp(-i p_k x_min / hbar) * (-1)^j * exp(-2 pi i k j / n)
    std::vector<complex> buf(psi.samples);
    for (std::size_t j = 1; j < n; j += 2) buf[j] = -buf[j];
    plan.forward(buf);

    const double scale = psi.grid.dx() / std::sqrt(two_pi * units.hbar);
    ComplexField out(pg);
    for (std::size_t k = 0; k < n; ++k) {
        const double phase = -pg.x(k) * psi.grid.x_min / units.hbar;
        out[k] = buf[k] * complex(std::cos(phase), std::sin(phase)) * scale;
    }
    return out;
}

ComplexField position_representation(const ComplexField& psi_p, const SpatialGrid& x_grid,
                                     const SimUnits& units) {
    const std::size_t n = psi_p.size();
    if (x_grid.n != n)
        throw std::invalid_argument("position_representation: grid size mismatch");
    FftPlan plan(n);

    std::vector<complex> buf(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double phase = psi_p.grid.x(k) * x_grid.x_min / units.hbar;
        buf[k] = psi_p[k] * complex(std::cos(phase), std::sin(phase));
    }
    plan.inverse(buf);

    const double scale = std::sqrt(two_pi * units.hbar) / x_grid.dx();
    ComplexField out(x_grid);
    for (std::size_t j = 0; j < n; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        out[j] = buf[j] * (scale * sign);
    }
    return out;
}

namespace {

// Angular wavenumber of FFT bin m on a grid of span L, with the Nyquist
// bin handled by the caller.
inline double bin_wavenumber(std::size_t m, std::size_t n, double span) {
    const auto mi = static_cast<std::ptrdiff_t>(m);
    const auto ni = static_cast<std::ptrdiff_t>(n);
    const std::ptrdiff_t f = mi <= ni / 2 ? mi : mi - ni;
    return two_pi * static_cast<double>(f) / span;
}

}  // namespace

ComplexField spectral_derivative(const ComplexField& f) {
    const std::size_t n = f.size();
    const FftPlan& plan = cached_plan(n);
    std::vector<complex> buf(f.samples);
    plan.forward(buf);
    for (std::size_t m = 0; m < n; ++m) {
        if (m == n / 2) {
            buf[m] = 0.0;  // Nyquist has no well-defined odd derivative
            continue;
        }
        buf[m] *= complex(0.0, bin_wavenumber(m, n, f.grid.span()));
    }
    plan.inverse(buf);
    return ComplexField(f.grid, std::move(buf));
}

RealField spectral_derivative(const RealField& f) {
    ComplexField c(f.grid);
    for (std::size_t j = 0; j < f.size(); ++j) c[j] = f[j];
    ComplexField d = spectral_derivative(c);
    RealField out(f.grid);
    for (std::size_t j = 0; j < f.size(); ++j) out[j] = d[j].real();
    return out;
}

ComplexField fourier_shift(const ComplexField& f, double shift) {
    const std::size_t n = f.size();
    const FftPlan& plan = cached_plan(n);
    std::vector<complex> buf(f.samples);
    plan.forward(buf);
    for (std::size_t m = 0; m < n; ++m) {
        const double k = bin_wavenumber(m, n, f.grid.span());
        if (m == n / 2) {
            buf[m] *= std::cos(k * shift);  // keep the Nyquist bin symmetric
            continue;
        }
        const double ang = k * shift;
        buf[m] *= complex(std::cos(ang), std::sin(ang));
    }
    plan.inverse(buf);
    return ComplexField(f.grid, std::move(buf));
}

}  // namespace nwlab::core
