// AVX2/FMA variants of the kernels in kernels_scalar.cpp. This translation
// unit is compiled with -mavx2 -mfma and must only be entered after the
// dispatcher has confirmed CPU support.

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "modecenter/simd.hpp"

namespace modecenter::simd {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

// exp(x) by range reduction x = n ln2 + r, |r| <= ln2/2, and a degree-13
// Taylor polynomial (truncation error < 5e-18). Arguments below the normal
// range flush to zero; -inf maps to 0 and overflow to +inf.
inline __m256d exp_pd(__m256d x) {
  const __m256d lo_limit = _mm256_set1_pd(-708.39);
  const __m256d hi_limit = _mm256_set1_pd(709.782712893384);
  const __m256d underflow = _mm256_cmp_pd(x, lo_limit, _CMP_LT_OQ);
  const __m256d overflow = _mm256_cmp_pd(x, hi_limit, _CMP_GT_OQ);
  x = _mm256_min_pd(_mm256_max_pd(x, lo_limit), hi_limit);

  const __m256d log2e = _mm256_set1_pd(1.4426950408889634074);
  const __m256d ln2_hi = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d ln2_lo = _mm256_set1_pd(1.42860682030941723212e-6);
  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                     _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, ln2_hi, x);
  r = _mm256_fnmadd_pd(n, ln2_lo, r);

  __m256d p = _mm256_set1_pd(1.0 / 6227020800.0);                 // 1/13!
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 479001600.0));   // 1/12!
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 39916800.0));    // 1/11!
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 3628800.0));     // 1/10!
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 362880.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 40320.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 5040.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 720.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 120.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 24.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 6.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(0.5));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));

  // 2^n as 2^(n>>1) * 2^(n - (n>>1)): n reaches 1024 just below the
  // overflow threshold, one past the largest exponent field.
  const __m128i n32 = _mm256_cvtpd_epi32(n);
  const __m128i half = _mm_srai_epi32(n32, 1);
  const __m128i rest = _mm_sub_epi32(n32, half);
  const __m256i bias = _mm256_set1_epi64x(1023);
  const __m256d s1 = _mm256_castsi256_pd(
      _mm256_slli_epi64(_mm256_add_epi64(_mm256_cvtepi32_epi64(half), bias), 52));
  const __m256d s2 = _mm256_castsi256_pd(
      _mm256_slli_epi64(_mm256_add_epi64(_mm256_cvtepi32_epi64(rest), bias), 52));
  const __m256d result = _mm256_mul_pd(_mm256_mul_pd(p, s1), s2);
  const __m256d inf = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  return _mm256_blendv_pd(_mm256_blendv_pd(result, _mm256_setzero_pd(), underflow), inf,
                          overflow);
}

// log(x) for x > 0: x = 2^e m with m in [sqrt(1/2), sqrt(2)), then
// log m = 2 atanh(s), s = (m-1)/(m+1), |s| <= 0.1716, series through s^21.
// Zero and subnormal inputs return -inf.
inline __m256d log_pd(__m256d x) {
  const __m256d tiny = _mm256_set1_pd(std::numeric_limits<double>::min());
  const __m256d is_zero = _mm256_cmp_pd(x, tiny, _CMP_LT_OQ);

  const __m256i bits = _mm256_castpd_si256(x);
  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000LL);
  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));

  // Biased exponent: low 32 bits of each 64-bit lane after the shift.
  const __m256i ebits = _mm256_srli_epi64(bits, 52);
  const __m256i pick = _mm256_setr_epi32(0, 2, 4, 6, 0, 2, 4, 6);
  const __m128i e32 = _mm256_castsi256_si128(_mm256_permutevar8x32_epi32(ebits, pick));
  __m256d e = _mm256_sub_pd(_mm256_cvtepi32_pd(e32), _mm256_set1_pd(1023.0));

  const __m256d sqrt2 = _mm256_set1_pd(1.4142135623730950488);
  const __m256d big = _mm256_cmp_pd(m, sqrt2, _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
  e = _mm256_blendv_pd(e, _mm256_add_pd(e, _mm256_set1_pd(1.0)), big);

  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d f = _mm256_sub_pd(m, one);
  const __m256d s = _mm256_div_pd(f, _mm256_add_pd(m, one));
  const __m256d z = _mm256_mul_pd(s, s);

  __m256d r = _mm256_set1_pd(1.0 / 21.0);
  r = _mm256_fmadd_pd(r, z, _mm256_set1_pd(1.0 / 19.0));
  r = _mm256_fmadd_pd(r, z, _mm256_set1_pd(1.0 / 17.0));
  r = _mm256_fmadd_pd(r, z, _mm256_set1_pd(1.0 / 15.0));
  r = _mm256_fmadd_pd(r, z, _mm256_set1_pd(1.0 / 13.0));
  r = _mm256_fmadd_pd(r, z, _mm256_set1_pd(1.0 / 11.0));
  r = _mm256_fmadd_pd(r, z, _mm256_set1_pd(1.0 / 9.0));
  r = _mm256_fmadd_pd(r, z, _mm256_set1_pd(1.0 / 7.0));
  r = _mm256_fmadd_pd(r, z, _mm256_set1_pd(1.0 / 5.0));
  r = _mm256_fmadd_pd(r, z, _mm256_set1_pd(1.0 / 3.0));
  r = _mm256_mul_pd(r, z);

  // log m = 2s + 2s r; added to e ln2 split into hi/lo parts.
  const __m256d two_s = _mm256_add_pd(s, s);
  const __m256d logm = _mm256_fmadd_pd(two_s, r, two_s);
  const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
  const __m256d result = _mm256_fmadd_pd(e, ln2_hi, _mm256_fmadd_pd(e, ln2_lo, logm));
  return _mm256_blendv_pd(result, _mm256_set1_pd(kNegInf), is_zero);
}

inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

double gauss_sum(const double* x, std::size_t n, double center, double inv_bw) {
  const __m256d c = _mm256_set1_pd(center);
  const __m256d k = _mm256_set1_pd(inv_bw);
  const __m256d mhalf = _mm256_set1_pd(-0.5);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d z0 = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i), c), k);
    const __m256d z1 = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i + 4), c), k);
    acc0 = _mm256_add_pd(acc0, exp_pd(_mm256_mul_pd(mhalf, _mm256_mul_pd(z0, z0))));
    acc1 = _mm256_add_pd(acc1, exp_pd(_mm256_mul_pd(mhalf, _mm256_mul_pd(z1, z1))));
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d z = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i), c), k);
    acc0 = _mm256_add_pd(acc0, exp_pd(_mm256_mul_pd(mhalf, _mm256_mul_pd(z, z))));
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    const double z = (x[i] - center) * inv_bw;
    acc += std::exp(-0.5 * z * z);
  }
  return acc;
}

double bump_scores(const double* x, std::size_t n, double center, double inv_h, double beta,
                   double* scores) {
  const __m256d c = _mm256_set1_pd(center);
  const __m256d k = _mm256_set1_pd(inv_h);
  const __m256d b = _mm256_set1_pd(beta);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d ninf = _mm256_set1_pd(kNegInf);
  __m256d best = ninf;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d u = _mm256_mul_pd(abs_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i), c)), k);
    const __m256d inside = _mm256_cmp_pd(u, one, _CMP_LT_OQ);
    const __m256d p = exp_pd(_mm256_mul_pd(b, log_pd(u)));
    const __m256d s = _mm256_div_pd(_mm256_set1_pd(-1.0), _mm256_sub_pd(one, p));
    const __m256d out = _mm256_blendv_pd(ninf, s, inside);
    _mm256_storeu_pd(scores + i, out);
    best = _mm256_max_pd(best, out);
  }
  double m = hmax(best);
  for (; i < n; ++i) {
    const double u = std::fabs(x[i] - center) * inv_h;
    double s = kNegInf;
    if (u < 1.0) s = 1.0 / std::expm1(beta * std::log(u));
    scores[i] = s;
    m = std::max(m, s);
  }
  return m;
}

void softmax_moments(const double* scores, const double* x, std::size_t n, double shift,
                     double center, double* weights_out, double* sum_w, double* sum_wd) {
  const __m256d sh = _mm256_set1_pd(shift);
  const __m256d c = _mm256_set1_pd(center);
  __m256d sw = _mm256_setzero_pd();
  __m256d swd = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d w = exp_pd(_mm256_sub_pd(_mm256_loadu_pd(scores + i), sh));
    if (weights_out != nullptr) _mm256_storeu_pd(weights_out + i, w);
    sw = _mm256_add_pd(sw, w);
    swd = _mm256_fmadd_pd(w, _mm256_sub_pd(_mm256_loadu_pd(x + i), c), swd);
  }
  double a = hsum(sw);
  double bsum = hsum(swd);
  for (; i < n; ++i) {
    const double w = std::exp(scores[i] - shift);
    if (weights_out != nullptr) weights_out[i] = w;
    a += w;
    bsum += w * (x[i] - center);
  }
  *sum_w = a;
  *sum_wd = bsum;
}

void interp_even(const double* table, std::size_t size, double inv_dx, const double* q,
                 std::size_t n, double* out) {
  const double last = static_cast<double>(size - 1);
  const __m256d vlast = _mm256_set1_pd(last);
  const __m256d vlast1 = _mm256_set1_pd(last - 1.0);
  const __m256d k = _mm256_set1_pd(inv_dx);
  std::size_t i = 0;
  // Gathers index with 32-bit offsets; larger tables use the scalar tail path.
  if (size < (std::size_t{1} << 30)) {
    for (; i + 4 <= n; i += 4) {
      const __m256d t = _mm256_mul_pd(abs_pd(_mm256_loadu_pd(q + i)), k);
      const __m256d valid = _mm256_cmp_pd(t, vlast, _CMP_LE_OQ);
      const __m256d tc = _mm256_blendv_pd(_mm256_setzero_pd(), t, valid);
      const __m256d fl = _mm256_min_pd(_mm256_floor_pd(tc), vlast1);
      const __m256d frac = _mm256_sub_pd(tc, fl);
      const __m128i idx = _mm256_cvttpd_epi32(fl);
      const __m256d a = _mm256_i32gather_pd(table, idx, 8);
      const __m256d b = _mm256_i32gather_pd(table + 1, idx, 8);
      const __m256d v = _mm256_add_pd(a, _mm256_mul_pd(frac, _mm256_sub_pd(b, a)));
      _mm256_storeu_pd(out + i, _mm256_blendv_pd(_mm256_setzero_pd(), v, valid));
    }
  }
  for (; i < n; ++i) {
    const double t = std::fabs(q[i]) * inv_dx;
    if (!(t <= last)) {
      out[i] = 0.0;
      continue;
    }
    const double fl = std::min(std::floor(t), last - 1.0);
    const auto j = static_cast<std::size_t>(fl);
    const double frac = t - fl;
    out[i] = table[j] + frac * (table[j + 1] - table[j]);
  }
}

void dot2(const double* a, const double* b, const double* f, std::size_t n, double* sum_af,
          double* sum_bf) {
  __m256d sa = _mm256_setzero_pd();
  __m256d sb = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d fv = _mm256_loadu_pd(f + i);
    sa = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), fv, sa);
    sb = _mm256_fmadd_pd(_mm256_loadu_pd(b + i), fv, sb);
  }
  double ra = hsum(sa);
  double rb = hsum(sb);
  for (; i < n; ++i) {
    ra += a[i] * f[i];
    rb += b[i] * f[i];
  }
  *sum_af = ra;
  *sum_bf = rb;
}

void exp_batch(const double* x, std::size_t n, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, exp_pd(_mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = std::exp(x[i]);
}

void log_batch(const double* x, std::size_t n, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, log_pd(_mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = std::log(x[i]);
}

}  // namespace

namespace detail {
const Ops kAvx2Ops{&gauss_sum, &bump_scores, &softmax_moments, &interp_even,
                   &dot2,      &exp_batch,   &log_batch};
}  // namespace detail

}  // namespace modecenter::simd
