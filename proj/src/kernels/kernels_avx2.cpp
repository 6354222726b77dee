// Compiled with -mavx2 -mfma; only entered after a runtime CPU check.
#include "qnet/kernels.hpp"

#if defined(QNET_HAVE_AVX2)

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace qnet::kernels {
namespace {

// exp(x) for 4 doubles. Range reduction x = n ln2 + r, |r| <= ln2/2, then a
// degree-13 Taylor polynomial in Horner form; max relative error ~2e-16.
inline __m256d exp_pd(__m256d x) {
    const __m256d lo_clamp = _mm256_set1_pd(-708.0);
    const __m256d hi_clamp = _mm256_set1_pd(709.0);
    const __m256d underflow = _mm256_cmp_pd(x, lo_clamp, _CMP_LT_OQ);
    x = _mm256_min_pd(_mm256_max_pd(x, lo_clamp), hi_clamp);

    const __m256d log2e = _mm256_set1_pd(1.4426950408889634);
    const __m256d ln2_hi = _mm256_set1_pd(6.93145751953125e-1);
    const __m256d ln2_lo = _mm256_set1_pd(1.42860682030941723212e-6);

    const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, ln2_hi, x);
    r = _mm256_fnmadd_pd(n, ln2_lo, r);

    static constexpr double kCoeff[] = {
        1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0,
        1.0 / 362880.0,     1.0 / 40320.0,     1.0 / 5040.0,     1.0 / 720.0,
        1.0 / 120.0,        1.0 / 24.0,        1.0 / 6.0,        0.5,
        1.0,                1.0,
    };
    __m256d poly = _mm256_set1_pd(kCoeff[0]);
    for (std::size_t i = 1; i < std::size(kCoeff); ++i) {
        poly = _mm256_fmadd_pd(poly, r, _mm256_set1_pd(kCoeff[i]));
    }

    // 2^n via the exponent field; n is in [-1022, 1023] after clamping.
    const __m128i n32 = _mm256_cvtpd_epi32(n);
    __m256i bits = _mm256_cvtepi32_epi64(n32);
    bits = _mm256_add_epi64(bits, _mm256_set1_epi64x(1023));
    bits = _mm256_slli_epi64(bits, 52);
    const __m256d result = _mm256_mul_pd(poly, _mm256_castsi256_pd(bits));
    return _mm256_andnot_pd(underflow, result);
}

void jsi_row_avx2(const JsiRowParams& p, double signal_thz, std::span<const double> idler_thz,
                  std::span<double> out) {
    const std::size_t n = idler_thz.size();
    const std::size_t packed = n & ~std::size_t{3};
    const __m256d fs = _mm256_set1_pd(signal_thz);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d neg_inv_two_var = _mm256_set1_pd(-1.0 / (2.0 * p.pm_sigma_thz * p.pm_sigma_thz));
    const __m256d pm_center = _mm256_set1_pd(p.pm_center_thz);

    std::size_t j = 0;
    for (; j < packed; j += 4) {
        const __m256d fi = _mm256_loadu_pd(idler_thz.data() + j);
        const __m256d pump = _mm256_add_pd(fs, fi);
        __m256d amplitude = zero;
        for (const auto& seg : p.segments) {
            const __m256d below = _mm256_sub_pd(_mm256_set1_pd(seg.lo_thz), pump);
            const __m256d above = _mm256_sub_pd(pump, _mm256_set1_pd(seg.hi_thz));
            const __m256d d = _mm256_max_pd(_mm256_max_pd(below, above), zero);
            const __m256d k = _mm256_set1_pd(-1.0 / (2.0 * seg.edge_sigma_thz * seg.edge_sigma_thz));
            amplitude = _mm256_add_pd(amplitude, exp_pd(_mm256_mul_pd(_mm256_mul_pd(d, d), k)));
        }
        const __m256d x = _mm256_sub_pd(_mm256_sub_pd(fs, fi), pm_center);
        const __m256d pm = exp_pd(_mm256_mul_pd(_mm256_mul_pd(x, x), neg_inv_two_var));
        _mm256_storeu_pd(out.data() + j, _mm256_mul_pd(_mm256_mul_pd(amplitude, amplitude), pm));
    }
    if (j < n) {
        scalar_table().jsi_row(p, signal_thz, idler_thz.subspan(j), out.subspan(j));
    }
}

double sum_avx2(std::span<const double> values) {
    const std::size_t n = values.size();
    const double* data = values.data();
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(data + i));
        acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(data + i + 4));
    }
    if (i + 4 <= n) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(data + i));
        i += 4;
    }
    acc0 = _mm256_add_pd(acc0, acc1);
    const __m128d half = _mm_add_pd(_mm256_castpd256_pd128(acc0), _mm256_extractf128_pd(acc0, 1));
    double total = _mm_cvtsd_f64(_mm_add_sd(half, _mm_unpackhi_pd(half, half)));
    for (; i < n; ++i) total += data[i];
    return total;
}

void scale_avx2(std::span<double> values, double factor) {
    const std::size_t n = values.size();
    double* data = values.data();
    const __m256d f = _mm256_set1_pd(factor);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(data + i, _mm256_mul_pd(_mm256_loadu_pd(data + i), f));
    for (; i < n; ++i) data[i] *= factor;
}

void exp_avx2(std::span<const double> x, std::span<double> out) {
    const std::size_t n = x.size();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out.data() + i, exp_pd(_mm256_loadu_pd(x.data() + i)));
    for (; i < n; ++i) out[i] = x[i] < -708.0 ? 0.0 : std::exp(x[i]);
}

}  // namespace

const KernelTable* avx2_table() {
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    static const KernelTable table{"avx2", &jsi_row_avx2, &sum_avx2, &scale_avx2, &exp_avx2};
    return supported ? &table : nullptr;
}

}  // namespace qnet::kernels

#else

namespace qnet::kernels {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace qnet::kernels

#endif
