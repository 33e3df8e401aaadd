#pragma once
#include <cstddef>

// Flat numeric loops that dominate the profiles: conditional-mean dot
// products in exact Gaussian sampling, forward Riemann sums, squared
// increment sums, level-window occupation sums, and the sliding dot
// products behind the fractional operators on uniform grids.
//
// kernels_scalar.cpp holds the reference implementations, kernels_avx2.cpp
// the vector variants; dispatch.cpp picks a table once at startup (CPU
// detection, overridable with PATHINT_SIMD=scalar or force()).

namespace pathint::kernels {

struct Backend {
  const char* name;
  // sum_i x[i]*y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y[i] += a*x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  // sum_{i>=1} (x[i]-x[i-1])^2
  double (*sum_sq_diff)(const double* x, std::size_t n);
  // sum_{i>=1} f[i-1]*(g[i]-g[i-1])
  double (*forward_sum)(const double* f, const double* g, std::size_t n);
  // out[i] = |x[i]-c|
  void (*abs_diff)(const double* x, double c, double* out, std::size_t n);
  // sum of dclock[i] over i with lo < y[i] < hi (strict on both sides)
  double (*masked_clock_sum)(const double* y, const double* dclock,
                             std::size_t n, double lo, double hi);
  // max_i (d[i]*w[i] + g[i]); -inf for n == 0
  double (*max_fma)(const double* d, const double* w, const double* g,
                    std::size_t n);
};

const Backend& scalar_backend();
const Backend& avx2_backend();  // only meaningful when avx2_supported()
bool avx2_supported();

const Backend& active();
void force(const char* name);  // "scalar" | "avx2" | "auto"

}  // namespace pathint::kernels
