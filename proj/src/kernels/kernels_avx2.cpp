// Compiled with -mavx2 -ffp-contract=off; only reached after a runtime CPU check.
#include <immintrin.h>

#include "kernels_internal.hpp"

namespace infoprice::kernels::avx2 {

namespace {

inline __m256d exp4(__m256d x) {
  using namespace exp_consts;
  const __m256d vhi = _mm256_set1_pd(hi);
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d too_big = _mm256_cmp_pd(x, vhi, _CMP_GT_OQ);
  const __m256d too_small = _mm256_cmp_pd(x, vlo, _CMP_LT_OQ);
  const __m256d is_nan = _mm256_cmp_pd(x, x, _CMP_UNORD_Q);
  const __m256d xc = _mm256_min_pd(_mm256_max_pd(x, vlo), vhi);

  const __m256d n =
      _mm256_round_pd(_mm256_mul_pd(xc, _mm256_set1_pd(log2e)),
                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_sub_pd(xc, _mm256_mul_pd(n, _mm256_set1_pd(ln2_hi)));
  r = _mm256_sub_pd(r, _mm256_mul_pd(n, _mm256_set1_pd(ln2_lo)));
  const __m256d rr = _mm256_mul_pd(r, r);

  __m256d px = _mm256_add_pd(_mm256_mul_pd(_mm256_set1_pd(p0), rr), _mm256_set1_pd(p1));
  px = _mm256_add_pd(_mm256_mul_pd(px, rr), _mm256_set1_pd(p2));
  px = _mm256_mul_pd(r, px);
  __m256d qx = _mm256_add_pd(_mm256_mul_pd(_mm256_set1_pd(q0), rr), _mm256_set1_pd(q1));
  qx = _mm256_add_pd(_mm256_mul_pd(qx, rr), _mm256_set1_pd(q2));
  qx = _mm256_add_pd(_mm256_mul_pd(qx, rr), _mm256_set1_pd(q3));

  __m256d e = _mm256_div_pd(px, _mm256_sub_pd(qx, px));
  e = _mm256_add_pd(_mm256_set1_pd(1.0), _mm256_mul_pd(_mm256_set1_pd(2.0), e));

  const __m256d biased =
      _mm256_add_pd(_mm256_add_pd(n, _mm256_set1_pd(1023.0)), _mm256_set1_pd(shifter));
  const __m256d scale = _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_castpd_si256(biased), 52));
  __m256d result = _mm256_mul_pd(e, scale);

  result = _mm256_blendv_pd(result, _mm256_set1_pd(std::numeric_limits<double>::infinity()),
                            too_big);
  result = _mm256_blendv_pd(result, _mm256_setzero_pd(), too_small);
  result = _mm256_blendv_pd(result, x, is_nan);
  return result;
}

}  // namespace

void axpby(double a, const double* x, double b, const double* y, double* out, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ax = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    const __m256d by = _mm256_mul_pd(vb, _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(ax, by));
  }
  for (; i < n; ++i) {
    const double ax = a * x[i];
    const double by = b * y[i];
    out[i] = ax + by;
  }
}

void exp(const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, exp4(_mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = exp_reference(x[i]);
}

void logistic_affine(double c0, double c1, const double* x, double* out, std::size_t n) {
  const __m256d vc0 = _mm256_set1_pd(c0);
  const __m256d vc1 = _mm256_set1_pd(c1);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d sign = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d z = _mm256_add_pd(vc0, _mm256_mul_pd(vc1, _mm256_loadu_pd(x + i)));
    const __m256d e = exp4(_mm256_xor_pd(z, sign));
    _mm256_storeu_pd(out + i, _mm256_div_pd(one, _mm256_add_pd(one, e)));
  }
  for (; i < n; ++i) {
    const double z = c0 + c1 * x[i];
    out[i] = 1.0 / (1.0 + exp_reference(-z));
  }
}

SumOfSquares sum_and_squares(const double* x, std::size_t n) {
  __m256d s = _mm256_setzero_pd();
  __m256d q = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    s = _mm256_add_pd(s, v);
    q = _mm256_add_pd(q, _mm256_mul_pd(v, v));
  }
  alignas(32) double sl[4];
  alignas(32) double ql[4];
  _mm256_store_pd(sl, s);
  _mm256_store_pd(ql, q);
  for (; i < n; ++i) {
    sl[i % 4] += x[i];
    ql[i % 4] += x[i] * x[i];
  }
  return {(sl[0] + sl[1]) + (sl[2] + sl[3]), (ql[0] + ql[1]) + (ql[2] + ql[3])};
}

}  // namespace infoprice::kernels::avx2
