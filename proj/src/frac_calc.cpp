#include "pathint/frac_calc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "pathint/simd/kernels.hpp"

namespace pathint::frac {
namespace {

void check_order(double beta) {
  if (!(beta > 0.0 && beta < 1.0))
    throw std::invalid_argument("fractional order must lie in (0,1)");
}

std::vector<double> powers(std::size_t m, double p) {
  std::vector<double> out(m + 1);
  for (std::size_t k = 0; k <= m; ++k) out[k] = std::pow(static_cast<double>(k), p);
  return out;
}

// Reverse a weight table indexed by cell distance k=1..M into RA[m]=w[M-m],
// so that w[i-j] = RA[M-i+j] and the inner sums become contiguous dots.
std::vector<double> reversed(const std::vector<double>& w, std::size_t m_cells) {
  std::vector<double> r(m_cells + 1, 0.0);
  for (std::size_t k = 1; k <= m_cells; ++k) r[m_cells - k] = w[k];
  return r;
}

std::vector<double> mirror_values(const std::vector<double>& x) {
  return {x.rbegin(), x.rend()};
}

std::vector<double> integral_left(const std::vector<double>& f, double h,
                                  double beta) {
  const std::size_t m = f.size() - 1;
  const auto kb = powers(m, beta);
  const auto kb1 = powers(m, beta + 1.0);
  const double c0 = std::pow(h, beta) / beta;
  const double c1 = std::pow(h, beta + 1.0) / (beta + 1.0);

  std::vector<double> a(m + 1, 0.0), b(m + 1, 0.0);
  for (std::size_t k = 1; k <= m; ++k) {
    const double p0 = c0 * (kb[k] - kb[k - 1]);
    const double p1 = c1 * (kb1[k] - kb1[k - 1]);
    const double kd = static_cast<double>(k);
    a[k] = (1.0 - kd) * p0 + p1 / h;
    b[k] = kd * p0 - p1 / h;
  }
  const auto ra = reversed(a, m);
  const auto rb = reversed(b, m);

  const auto& K = kernels::active();
  const double inv_gamma = 1.0 / std::tgamma(beta);
  std::vector<double> out(m + 1, 0.0);
  for (std::size_t i = 1; i <= m; ++i)
    out[i] = inv_gamma * (K.dot(ra.data() + (m - i), f.data(), i) +
                          K.dot(rb.data() + (m - i), f.data() + 1, i));
  return out;
}

std::vector<double> derivative_left(const std::vector<double>& f, double h,
                                    double beta) {
  const std::size_t m = f.size() - 1;
  const auto knb = powers(m, -beta);        // k^-b (knb[0]=inf, unused)
  const auto k1mb = powers(m, 1.0 - beta);  // k^(1-b)
  const double q0c = std::pow(h, -beta) / beta;
  const double q1c = std::pow(h, 1.0 - beta) / (1.0 - beta);

  std::vector<double> c(m + 1, 0.0), d(m + 1, 0.0);
  for (std::size_t k = 2; k <= m; ++k) {
    const double q0 = q0c * (knb[k - 1] - knb[k]);
    const double q1 = q1c * (k1mb[k] - k1mb[k - 1]);
    const double kd = static_cast<double>(k);
    c[k] = (kd - 1.0) * q0 - q1 / h;
    d[k] = -kd * q0 + q1 / h;
  }
  const auto rc = reversed(c, m);
  const auto rd = reversed(d, m);

  const auto& K = kernels::active();
  const double inv_gamma = 1.0 / std::tgamma(1.0 - beta);
  const double hnb = std::pow(h, -beta);
  const double first_cell = hnb / (1.0 - beta);

  std::vector<double> out(m + 1, 0.0);
  if (f[0] != 0.0)
    out[0] = std::copysign(std::numeric_limits<double>::infinity(), f[0]);
  for (std::size_t i = 1; i <= m; ++i) {
    const double fi = f[i];
    // sum over cells at distance >= 2, split into coefficients of f_j, f_{j+1}
    // and the exactly telescoped f_i part E_i = sum_k Q0(k).
    double tail = 0.0;
    if (i >= 2) {
      const double e_i = q0c * (1.0 - knb[i]);
      tail = fi * e_i + K.dot(rc.data() + (m - i), f.data(), i - 1) +
             K.dot(rd.data() + (m - i), f.data() + 1, i - 1);
    }
    const double nearest = (f[i] - f[i - 1]) * first_cell;
    out[i] = inv_gamma * (fi * hnb * knb[i] + beta * (nearest + tail));
  }
  return out;
}

}  // namespace

SampledPath frac_integral(const SampledPath& f, const FracOperator& op) {
  check_order(op.order);
  const double h = f.uniform_step();
  if (op.side == Side::left)
    return f.with_values(integral_left(f.x(), h, op.order));
  auto rev = mirror_values(f.x());
  auto out = integral_left(rev, h, op.order);
  return f.with_values(mirror_values(out));
}

SampledPath frac_derivative(const SampledPath& f, const FracOperator& op) {
  check_order(op.order);
  const double h = f.uniform_step();
  if (op.side == Side::left)
    return f.with_values(derivative_left(f.x(), h, op.order));
  auto rev = mirror_values(f.x());
  auto out = derivative_left(rev, h, op.order);
  return f.with_values(mirror_values(out));
}

namespace {

// Shared singular-cell weights: L(k), U(k) integrate a piecewise-linear
// integrand against v^{-1-b} over [(k-1)h, kh]; the k=1 cell is finite
// because the integrand vanishes linearly at v=0.
struct SingularTables {
  std::vector<double> L, U;
};

SingularTables singular_tables(std::size_t m, double h, double beta) {
  const auto knb = powers(m, -beta);
  const auto k1mb = powers(m, 1.0 - beta);
  const double g0c = std::pow(h, -beta) / beta;
  const double g1c = std::pow(h, 1.0 - beta) / (1.0 - beta);
  SingularTables tb;
  tb.L.assign(m + 1, 0.0);
  tb.U.assign(m + 1, 0.0);
  if (m >= 1) tb.U[1] = std::pow(h, -beta) / (1.0 - beta);
  for (std::size_t k = 2; k <= m; ++k) {
    const double g0 = g0c * (knb[k - 1] - knb[k]);
    const double g1 = g1c * (k1mb[k] - k1mb[k - 1]);
    const double u = (g1 - (static_cast<double>(k) - 1.0) * h * g0) / h;
    tb.U[k] = u;
    tb.L[k] = g0 - u;
  }
  return tb;
}

}  // namespace

NormEstimate besov_w1_norm(const SampledPath& f, double beta) {
  check_order(beta);
  const double h = f.uniform_step();
  const std::size_t m = f.cells();
  const auto& x = f.x();
  const auto tb = singular_tables(m, h, beta);
  std::vector<double> holder_w(m + 1, 0.0);
  for (std::size_t k = 1; k <= m; ++k)
    holder_w[k] = std::pow(static_cast<double>(k) * h, -beta);

  const auto& K = kernels::active();
  std::vector<double> d(m + 1), g(m + 1);
  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_a = 0;
  for (std::size_t a = 0; a + 1 <= m; ++a) {
    const std::size_t len = m - a;
    K.abs_diff(x.data() + a, x[a], d.data(), len + 1);
    double acc = 0.0;
    for (std::size_t k = 1; k <= len; ++k) {
      acc += tb.L[k] * d[k - 1] + tb.U[k] * d[k];
      g[k] = acc;
    }
    const double cand = K.max_fma(d.data() + 1, holder_w.data() + 1, g.data() + 1, len);
    if (cand > best) {
      best = cand;
      best_a = a;
    }
  }

  // rescan the winning anchor to split the two components
  NormEstimate est;
  est.beta = beta;
  est.grid_cells = m;
  {
    const std::size_t a = best_a;
    const std::size_t len = m - a;
    K.abs_diff(x.data() + a, x[a], d.data(), len + 1);
    double acc = 0.0, top = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= len; ++k) {
      acc += tb.L[k] * d[k - 1] + tb.U[k] * d[k];
      const double cand = d[k] * holder_w[k] + acc;
      if (cand > top) {
        top = cand;
        est.first = d[k] * holder_w[k];
        est.second = acc;
      }
    }
    est.value = est.first + est.second;
  }
  return est;
}

NormEstimate besov_w2_norm(const SampledPath& f, double beta) {
  check_order(beta);
  const double h = f.uniform_step();
  const std::size_t m = f.cells();
  const auto& x = f.x();
  const auto& K = kernels::active();

  // first component: |f| against s^-b, exact per cell
  const auto k1mb = powers(m, 1.0 - beta);
  const auto k2mb = powers(m, 2.0 - beta);
  const double a0c = std::pow(h, 1.0 - beta) / (1.0 - beta);
  const double a1c = std::pow(h, 2.0 - beta) / (2.0 - beta);
  double term1 = 0.0;
  for (std::size_t k = 1; k <= m; ++k) {
    const double a0 = a0c * (k1mb[k] - k1mb[k - 1]);
    const double a1 = a1c * (k2mb[k] - k2mb[k - 1]);
    const double u = (a1 - (static_cast<double>(k) - 1.0) * h * a0) / h;
    term1 += (a0 - u) * std::fabs(x[k - 1]) + u * std::fabs(x[k]);
  }

  // second component: inner singular integral anchored at each s, outer
  // trapezoid in s
  const auto tb = singular_tables(m, h, beta);
  const auto rl = reversed(tb.L, m);
  const auto ru = reversed(tb.U, m);
  std::vector<double> dd(m + 1);
  double outer = 0.0;
  for (std::size_t b_idx = 1; b_idx <= m; ++b_idx) {
    K.abs_diff(x.data(), x[b_idx], dd.data(), b_idx + 1);
    const double inner = K.dot(ru.data() + (m - b_idx), dd.data(), b_idx) +
                         K.dot(rl.data() + (m - b_idx), dd.data() + 1, b_idx);
    outer += (b_idx == m) ? 0.5 * inner : inner;
  }

  NormEstimate est;
  est.beta = beta;
  est.grid_cells = m;
  est.first = term1;
  est.second = outer * h;
  est.value = est.first + est.second;
  return est;
}

}  // namespace pathint::frac
