#pragma once

#include <cstdint>

namespace nwlab::simd {

// Shared polynomial data for the portable log/cos kernels. The scalar and
// AVX2 paths evaluate these with the same operation order, so a draw is
// bitwise identical no matter which backend produced it (the project is
// built with -ffp-contract=off to keep that true).

inline constexpr double kLn2Hi = 0.6931471675634384;
inline constexpr double kLn2Lo = 1.2996506893889889e-08;
inline constexpr double kSqrt2 = 1.4142135623730951;

/// atanh-series coefficients 1/(2k+1), k = 0..9, for log.
inline constexpr double kLogCoeff[10] = {
    1.0,
    1.0 / 3.0,
    1.0 / 5.0,
    1.0 / 7.0,
    1.0 / 9.0,
    1.0 / 11.0,
    1.0 / 13.0,
    1.0 / 15.0,
    1.0 / 17.0,
    1.0 / 19.0,
};

/// cos(pi b) = Horner over b^2, valid for |b| <= 1/4.
inline constexpr double kCosPiCoeff[9] = {
    1.0,
    -4.934802200544679,
    4.0587121264167685,
    -1.3352627688545895,
    0.2353306303588932,
    -0.02580689139001406,
    0.0019295743094039231,
    -0.0001046381049248457,
    4.303069587032947e-06,
};

/// sin(pi b)/b = Horner over b^2, valid for |b| <= 1/4.
inline constexpr double kSinPiCoeff[8] = {
    3.141592653589793,
    -5.16771278004997,
    2.5501640398773455,
    -0.5992645293207921,
    0.08214588661112823,
    -0.0073704309457143504,
    0.00046630280576761255,
    -2.1915353447830217e-05,
};

/// ln(x) for normal positive x (branchless reduction + atanh series).
/// Not a libm replacement: relative error is a few 1e-16, plenty for
/// Monte Carlo sampling, and — the point — reproducible across backends.
double portable_log(double x);

/// cos(2*pi*u) for u in [0,1), with exact Sterbenz foldings so the
/// vector lanes perform the identical reductions.
double portable_cos_2pi(double u);

/// Standard normal from two uniform 32-bit words (Box-Muller, cosine
/// branch only).
double normal_from_words(std::uint32_t w0, std::uint32_t w1);

}  // namespace nwlab::simd
