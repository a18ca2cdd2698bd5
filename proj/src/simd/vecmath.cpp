#include "nwlab/simd/vecmath.hpp"

#include <bit>
#include <cmath>

#include "nwlab/simd/philox.hpp"

namespace nwlab::simd {

// Branchless scalar reference. Every select below mirrors a blend in the
// AVX2 path, and both evaluate the same polynomial in the same order.

double portable_log(double x) {
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(x);
    const std::int64_t e_raw = static_cast<std::int64_t>((bits >> 52) & 0x7FFu) - 1023;
    const std::uint64_t mant_bits =
        (bits & 0x000FFFFFFFFFFFFFull) | 0x3FF0000000000000ull;  // m in [1,2)
    const double m_raw = std::bit_cast<double>(mant_bits);

    const bool fold = m_raw > kSqrt2;
    const double m = fold ? m_raw * 0.5 : m_raw;
    const double e = static_cast<double>(fold ? e_raw + 1 : e_raw);

    const double s = (m - 1.0) / (m + 1.0);
    const double z = s * s;
    double p = kLogCoeff[9];
    p = p * z + kLogCoeff[8];
    p = p * z + kLogCoeff[7];
    p = p * z + kLogCoeff[6];
    p = p * z + kLogCoeff[5];
    p = p * z + kLogCoeff[4];
    p = p * z + kLogCoeff[3];
    p = p * z + kLogCoeff[2];
    p = p * z + kLogCoeff[1];
    p = p * z + kLogCoeff[0];
    const double lnm = (s + s) * p;

    const double hi = e * kLn2Hi;
    const double lo = e * kLn2Lo;
    const double mid = lnm + lo;
    return hi + mid;
}

double portable_cos_2pi(double u) {
    const double w0 = u + u;  // [0,2)
    const bool fold2 = w0 > 1.0;
    const double w = fold2 ? 2.0 - w0 : w0;  // [0,1], Sterbenz-exact
    const bool fold1 = w > 0.5;
    const double a = fold1 ? 1.0 - w : w;  // [0,0.5], Sterbenz-exact
    const bool use_sin = a > 0.25;
    const double b = use_sin ? 0.5 - a : a;  // [0,0.25], Sterbenz-exact
    const double t = b * b;

    double pc = kCosPiCoeff[8];
    pc = pc * t + kCosPiCoeff[7];
    pc = pc * t + kCosPiCoeff[6];
    pc = pc * t + kCosPiCoeff[5];
    pc = pc * t + kCosPiCoeff[4];
    pc = pc * t + kCosPiCoeff[3];
    pc = pc * t + kCosPiCoeff[2];
    pc = pc * t + kCosPiCoeff[1];
    pc = pc * t + kCosPiCoeff[0];

    double ps = kSinPiCoeff[7];
    ps = ps * t + kSinPiCoeff[6];
    ps = ps * t + kSinPiCoeff[5];
    ps = ps * t + kSinPiCoeff[4];
    ps = ps * t + kSinPiCoeff[3];
    ps = ps * t + kSinPiCoeff[2];
    ps = ps * t + kSinPiCoeff[1];
    ps = ps * t + kSinPiCoeff[0];
    ps = ps * b;

    const double r = use_sin ? ps : pc;
    const double sign = fold1 ? -1.0 : 1.0;
    return r * sign;
}

double normal_from_words(std::uint32_t w0, std::uint32_t w1) {
    const double u1 = uniform_from_u32(w0);
    const double u2 = uniform_from_u32(w1);
    const double lg = portable_log(u1);
    const double m2 = -2.0 * lg;
    const double radius = std::sqrt(m2);
    const double c = portable_cos_2pi(u2);
    return radius * c;
}

}  // namespace nwlab::simd
