// AVX2 variants of the ensemble kernels. Every floating-point operation
// here has a lane-for-lane counterpart in kernels_scalar.cpp, in the same
// order and without FMA, so the two backends produce bitwise identical
// output; tests/test_simd_kernels.cpp enforces that.

#include "nwlab/simd/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cstdint>

#include "nwlab/simd/philox.hpp"
#include "nwlab/simd/vecmath.hpp"

namespace nwlab::simd {

namespace {

const __m256i kLo32 = _mm256_set1_epi64x(0xFFFFFFFFll);
const __m256d kMagic52 = _mm256_set1_pd(0x1p52);

// double(w) for a 64-bit lane holding a value < 2^52.
inline __m256d u64_to_double(__m256i v) {
    const __m256i magic = _mm256_castpd_si256(kMagic52);
    return _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(v, magic)), kMagic52);
}

struct PhiloxVec {
    __m256i c0, c1, c2, c3;
};

// Four independent counters, one per 64-bit lane (low halves hold the
// 32-bit words).
inline PhiloxVec philox_block(std::uint64_t seed, std::uint32_t stream, __m256i particle,
                              std::uint64_t step) {
    const __m256i m0 = _mm256_set1_epi64x(Philox4x32::mul0);
    const __m256i m1 = _mm256_set1_epi64x(Philox4x32::mul1);
    const __m256i w0 = _mm256_set1_epi64x(Philox4x32::weyl0);
    const __m256i w1 = _mm256_set1_epi64x(Philox4x32::weyl1);

    __m256i c0 = _mm256_set1_epi64x(static_cast<std::uint32_t>(step));
    __m256i c1 = _mm256_set1_epi64x(static_cast<std::uint32_t>(step >> 32));
    __m256i c2 = _mm256_and_si256(particle, kLo32);
    __m256i c3 = _mm256_and_si256(_mm256_srli_epi64(particle, 32), kLo32);
    __m256i k0 = _mm256_set1_epi64x(static_cast<std::uint32_t>(seed));
    __m256i k1 = _mm256_set1_epi64x(static_cast<std::uint32_t>(
        static_cast<std::uint32_t>(seed >> 32) + stream * 0x85EBCA6Bu));

    for (int round = 0; round < 10; ++round) {
        const __m256i p0 = _mm256_mul_epu32(m0, c0);
        const __m256i p1 = _mm256_mul_epu32(m1, c2);
        const __m256i hi0 = _mm256_srli_epi64(p0, 32);
        const __m256i lo0 = _mm256_and_si256(p0, kLo32);
        const __m256i hi1 = _mm256_srli_epi64(p1, 32);
        const __m256i lo1 = _mm256_and_si256(p1, kLo32);
        const __m256i n0 = _mm256_xor_si256(_mm256_xor_si256(hi1, c1), k0);
        const __m256i n2 = _mm256_xor_si256(_mm256_xor_si256(hi0, c3), k1);
        c0 = n0;
        c1 = lo1;
        c2 = n2;
        c3 = lo0;
        k0 = _mm256_and_si256(_mm256_add_epi64(k0, w0), kLo32);
        k1 = _mm256_and_si256(_mm256_add_epi64(k1, w1), kLo32);
    }
    return {c0, c1, c2, c3};
}

inline __m256d uniform_from_words(__m256i w) {
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d scale = _mm256_set1_pd(0x1p-32);
    return _mm256_mul_pd(_mm256_add_pd(u64_to_double(w), half), scale);
}

inline __m256d log_vec(__m256d x) {
    const __m256i bits = _mm256_castpd_si256(x);
    const __m256i mant_bits = _mm256_or_si256(
        _mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFll)),
        _mm256_set1_epi64x(0x3FF0000000000000ll));
    const __m256d m_raw = _mm256_castsi256_pd(mant_bits);

    // Exponent as a double via the 2^52 magic trick (raw value 0..2046).
    const __m256i e_field = _mm256_srli_epi64(bits, 52);
    const __m256d e_biased = u64_to_double(e_field);
    const __m256d e_raw = _mm256_sub_pd(e_biased, _mm256_set1_pd(1023.0));

    const __m256d fold = _mm256_cmp_pd(m_raw, _mm256_set1_pd(kSqrt2), _CMP_GT_OQ);
    const __m256d m =
        _mm256_blendv_pd(m_raw, _mm256_mul_pd(m_raw, _mm256_set1_pd(0.5)), fold);
    const __m256d e =
        _mm256_blendv_pd(e_raw, _mm256_add_pd(e_raw, _mm256_set1_pd(1.0)), fold);

    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d s = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
    const __m256d z = _mm256_mul_pd(s, s);
    __m256d p = _mm256_set1_pd(kLogCoeff[9]);
    for (int k = 8; k >= 0; --k)
        p = _mm256_add_pd(_mm256_mul_pd(p, z), _mm256_set1_pd(kLogCoeff[k]));
    const __m256d lnm = _mm256_mul_pd(_mm256_add_pd(s, s), p);

    const __m256d hi = _mm256_mul_pd(e, _mm256_set1_pd(kLn2Hi));
    const __m256d lo = _mm256_mul_pd(e, _mm256_set1_pd(kLn2Lo));
    const __m256d mid = _mm256_add_pd(lnm, lo);
    return _mm256_add_pd(hi, mid);
}

inline __m256d cos_2pi_vec(__m256d u) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d quarter = _mm256_set1_pd(0.25);

    const __m256d w0 = _mm256_add_pd(u, u);
    const __m256d fold2 = _mm256_cmp_pd(w0, one, _CMP_GT_OQ);
    const __m256d w =
        _mm256_blendv_pd(w0, _mm256_sub_pd(_mm256_set1_pd(2.0), w0), fold2);
    const __m256d fold1 = _mm256_cmp_pd(w, half, _CMP_GT_OQ);
    const __m256d a = _mm256_blendv_pd(w, _mm256_sub_pd(one, w), fold1);
    const __m256d use_sin = _mm256_cmp_pd(a, quarter, _CMP_GT_OQ);
    const __m256d b = _mm256_blendv_pd(a, _mm256_sub_pd(half, a), use_sin);
    const __m256d t = _mm256_mul_pd(b, b);

    __m256d pc = _mm256_set1_pd(kCosPiCoeff[8]);
    for (int k = 7; k >= 0; --k)
        pc = _mm256_add_pd(_mm256_mul_pd(pc, t), _mm256_set1_pd(kCosPiCoeff[k]));

    __m256d ps = _mm256_set1_pd(kSinPiCoeff[7]);
    for (int k = 6; k >= 0; --k)
        ps = _mm256_add_pd(_mm256_mul_pd(ps, t), _mm256_set1_pd(kSinPiCoeff[k]));
    ps = _mm256_mul_pd(ps, b);

    const __m256d r = _mm256_blendv_pd(pc, ps, use_sin);
    const __m256d sign = _mm256_blendv_pd(one, _mm256_set1_pd(-1.0), fold1);
    return _mm256_mul_pd(r, sign);
}

void gaussian_fill_avx2(std::uint64_t seed, std::uint32_t stream, std::uint64_t particle0,
                        std::uint64_t step, double* out, std::size_t count) {
    const std::size_t main = count & ~std::size_t{3};
    for (std::size_t i = 0; i < main; i += 4) {
        const __m256i particle = _mm256_add_epi64(
            _mm256_set1_epi64x(static_cast<long long>(particle0 + i)),
            _mm256_set_epi64x(3, 2, 1, 0));
        const PhiloxVec r = philox_block(seed, stream, particle, step);
        const __m256d u1 = uniform_from_words(r.c0);
        const __m256d u2 = uniform_from_words(r.c1);
        const __m256d lg = log_vec(u1);
        const __m256d m2 = _mm256_mul_pd(_mm256_set1_pd(-2.0), lg);
        const __m256d radius = _mm256_sqrt_pd(m2);
        const __m256d c = cos_2pi_vec(u2);
        _mm256_storeu_pd(out + i, _mm256_mul_pd(radius, c));
    }
    if (main < count)
        scalar_backend().gaussian_fill(seed, stream, particle0 + main, step, out + main,
                                       count - main);
}

void em_step_avx2(double* x, std::size_t count, const DriftTable& drift, double dt,
                  double noise_scale, const double* noise, double x_lo, double x_hi,
                  std::uint64_t* exit_count) {
    const __m256d zero = _mm256_setzero_pd();
    const __m256d nm1 = _mm256_set1_pd(static_cast<double>(drift.n - 1));
    const __m256d nm2 = _mm256_set1_pd(static_cast<double>(drift.n - 2));
    const __m256d x0v = _mm256_set1_pd(drift.x0);
    const __m256d inv_dx = _mm256_set1_pd(drift.inv_dx);
    const __m256d dtv = _mm256_set1_pd(dt);
    const __m256d nsv = _mm256_set1_pd(noise_scale);
    const __m256d lov = _mm256_set1_pd(x_lo);
    const __m256d hiv = _mm256_set1_pd(x_hi);

    std::uint64_t exits = 0;
    const std::size_t main = count & ~std::size_t{3};
    for (std::size_t i = 0; i < main; i += 4) {
        const __m256d xi = _mm256_loadu_pd(x + i);
        __m256d f = _mm256_mul_pd(_mm256_sub_pd(xi, x0v), inv_dx);
        f = _mm256_max_pd(f, zero);
        f = _mm256_min_pd(f, nm1);
        const __m256d fj = _mm256_min_pd(_mm256_floor_pd(f), nm2);
        const __m128i j = _mm256_cvttpd_epi32(fj);
        const __m128i j1 = _mm_add_epi32(j, _mm_set1_epi32(1));
        const __m256d t = _mm256_sub_pd(f, fj);
        const __m256d dlo = _mm256_i32gather_pd(drift.values, j, 8);
        const __m256d dhi = _mm256_i32gather_pd(drift.values, j1, 8);
        const __m256d diff = _mm256_sub_pd(dhi, dlo);
        const __m256d c = _mm256_add_pd(dlo, _mm256_mul_pd(t, diff));
        const __m256d adv = _mm256_mul_pd(c, dtv);
        const __m256d moved = _mm256_add_pd(xi, adv);
        const __m256d kick = _mm256_mul_pd(nsv, _mm256_loadu_pd(noise + i));
        const __m256d xn = _mm256_add_pd(moved, kick);
        const __m256d out_mask = _mm256_or_pd(_mm256_cmp_pd(xn, lov, _CMP_LT_OQ),
                                              _mm256_cmp_pd(xn, hiv, _CMP_GT_OQ));
        exits += static_cast<unsigned>(__builtin_popcount(_mm256_movemask_pd(out_mask)));
        const __m256d clamped = _mm256_min_pd(_mm256_max_pd(xn, lov), hiv);
        _mm256_storeu_pd(x + i, clamped);
    }
    *exit_count += exits;
    if (main < count)
        scalar_backend().em_step(x + main, count - main, drift, dt, noise_scale, noise + main,
                                 x_lo, x_hi, exit_count);
}

}  // namespace

const KernelBackend* avx2_backend() {
    if (!__builtin_cpu_supports("avx2")) return nullptr;
    static const KernelBackend backend{"avx2", &gaussian_fill_avx2, &em_step_avx2};
    return &backend;
}

}  // namespace nwlab::simd

#else  // non-x86 build: no AVX2 backend

namespace nwlab::simd {
const KernelBackend* avx2_backend() { return nullptr; }
}  // namespace nwlab::simd

#endif
