// AVX2+FMA variants of the kernel table.  This translation unit is compiled
// with -mavx2 -mfma; nothing here runs unless dispatch.cpp saw the CPU flags.

#include "pathint/simd/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>
#include <limits>

namespace pathint::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double dot_v(const double* x, const double* y, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
  __m256d a2 = _mm256_setzero_pd(), a3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
    a1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), a1);
    a2 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 8), _mm256_loadu_pd(y + i + 8), a2);
    a3 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 12), _mm256_loadu_pd(y + i + 12), a3);
  }
  for (; i + 4 <= n; i += 4)
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
  double acc = hsum(_mm256_add_pd(_mm256_add_pd(a0, a1), _mm256_add_pd(a2, a3)));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy_v(double a, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i),
                                            _mm256_loadu_pd(y + i)));
    _mm256_storeu_pd(y + i + 4, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i + 4),
                                                _mm256_loadu_pd(y + i + 4)));
  }
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i),
                                            _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

double sum_v(const double* x, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    a0 = _mm256_add_pd(a0, _mm256_loadu_pd(x + i));
    a1 = _mm256_add_pd(a1, _mm256_loadu_pd(x + i + 4));
  }
  for (; i + 4 <= n; i += 4) a0 = _mm256_add_pd(a0, _mm256_loadu_pd(x + i));
  double acc = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) acc += x[i];
  return acc;
}

double sum_sq_diff_v(const double* x, std::size_t n) {
  if (n < 2) return 0.0;
  __m256d a0 = _mm256_setzero_pd();
  std::size_t i = 1;
  for (; i + 4 <= n; i += 4) {
    const __m256d d =
        _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(x + i - 1));
    a0 = _mm256_fmadd_pd(d, d, a0);
  }
  double acc = hsum(a0);
  for (; i < n; ++i) {
    const double d = x[i] - x[i - 1];
    acc += d * d;
  }
  return acc;
}

double forward_sum_v(const double* f, const double* g, std::size_t n) {
  if (n < 2) return 0.0;
  __m256d a0 = _mm256_setzero_pd();
  std::size_t i = 1;
  for (; i + 4 <= n; i += 4) {
    const __m256d dg =
        _mm256_sub_pd(_mm256_loadu_pd(g + i), _mm256_loadu_pd(g + i - 1));
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(f + i - 1), dg, a0);
  }
  double acc = hsum(a0);
  for (; i < n; ++i) acc += f[i - 1] * (g[i] - g[i - 1]);
  return acc;
}

void abs_diff_v(const double* x, double c, double* out, std::size_t n) {
  const __m256d cv = _mm256_set1_pd(c);
  const __m256d mask = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_andnot_pd(mask, _mm256_sub_pd(
                                                         _mm256_loadu_pd(x + i), cv)));
  for (; i < n; ++i) out[i] = std::fabs(x[i] - c);
}

double masked_clock_sum_v(const double* y, const double* dclock, std::size_t n,
                          double lo, double hi) {
  const __m256d lov = _mm256_set1_pd(lo), hiv = _mm256_set1_pd(hi);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d yv = _mm256_loadu_pd(y + i);
    const __m256d in = _mm256_and_pd(_mm256_cmp_pd(yv, lov, _CMP_GT_OQ),
                                     _mm256_cmp_pd(yv, hiv, _CMP_LT_OQ));
    acc = _mm256_add_pd(acc, _mm256_and_pd(in, _mm256_loadu_pd(dclock + i)));
  }
  double s = hsum(acc);
  for (; i < n; ++i)
    if (y[i] > lo && y[i] < hi) s += dclock[i];
  return s;
}

double max_fma_v(const double* d, const double* w, const double* g,
                 std::size_t n) {
  const double ninf = -std::numeric_limits<double>::infinity();
  __m256d best = _mm256_set1_pd(ninf);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_fmadd_pd(_mm256_loadu_pd(d + i),
                                      _mm256_loadu_pd(w + i),
                                      _mm256_loadu_pd(g + i));
    best = _mm256_max_pd(best, v);
  }
  double m = hmax(best);
  for (; i < n; ++i) {
    const double v = d[i] * w[i] + g[i];
    if (v > m) m = v;
  }
  return m;
}

}  // namespace

const Backend& avx2_backend() {
  static const Backend table{"avx2",        dot_v,      axpy_v,
                             sum_v,         sum_sq_diff_v, forward_sum_v,
                             abs_diff_v,    masked_clock_sum_v, max_fma_v};
  return table;
}

}  // namespace pathint::kernels

#else  // non-x86 build: report the scalar table under the avx2 name

namespace pathint::kernels {
const Backend& avx2_backend() { return scalar_backend(); }
}  // namespace pathint::kernels

#endif
