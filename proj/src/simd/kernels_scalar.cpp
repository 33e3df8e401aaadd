#include "pathint/simd/kernels.hpp"

#include <cmath>
#include <limits>

namespace pathint::kernels {
namespace {

double dot_s(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy_s(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double sum_s(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double sum_sq_diff_s(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double d = x[i] - x[i - 1];
    acc += d * d;
  }
  return acc;
}

double forward_sum_s(const double* f, const double* g, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 1; i < n; ++i) acc += f[i - 1] * (g[i] - g[i - 1]);
  return acc;
}

void abs_diff_s(const double* x, double c, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::fabs(x[i] - c);
}

double masked_clock_sum_s(const double* y, const double* dclock, std::size_t n,
                          double lo, double hi) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (y[i] > lo && y[i] < hi) acc += dclock[i];
  return acc;
}

double max_fma_s(const double* d, const double* w, const double* g,
                 std::size_t n) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double v = d[i] * w[i] + g[i];
    if (v > best) best = v;
  }
  return best;
}

}  // namespace

const Backend& scalar_backend() {
  static const Backend table{"scalar",       dot_s,      axpy_s,
                             sum_s,          sum_sq_diff_s, forward_sum_s,
                             abs_diff_s,     masked_clock_sum_s, max_fma_s};
  return table;
}

}  // namespace pathint::kernels
