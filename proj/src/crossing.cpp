#include "pathint/crossing.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "pathint/rng.hpp"

namespace pathint::cross {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double norm_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }
double norm_tail(double x) { return 0.5 * std::erfc(x / kSqrt2); }

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

void check_pair(const gauss::CovarianceModel& m, double s, double t,
                bool allow_equal) {
  require(s > 0.0, "crossing needs s > 0");
  require(allow_equal ? s <= t : s < t,
          allow_equal ? "crossing needs s <= t" : "crossing needs s < t");
  require(t <= m.horizon, "crossing needs t within the model horizon");
}

// Adaptive Simpson with the standard 1/15 error update; the interval halves
// until the local estimate settles or the depth cap is hit.
template <typename F>
double adapt(const F& f, double lo, double mid, double hi, double flo,
             double fmid, double fhi, double whole, double tol, int depth) {
  const double lmid = 0.5 * (lo + mid);
  const double rmid = 0.5 * (mid + hi);
  const double flm = f(lmid);
  const double frm = f(rmid);
  const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
  const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
  const double both = left + right;
  if (depth <= 0 || std::fabs(both - whole) <= 15.0 * tol)
    return both + (both - whole) / 15.0;
  return adapt(f, lo, lmid, mid, flo, flm, fmid, left, 0.5 * tol, depth - 1) +
         adapt(f, mid, rmid, hi, fmid, frm, fhi, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate(const F& f, double lo, double hi, double tol) {
  if (!(lo < hi)) return 0.0;
  const double mid = 0.5 * (lo + hi);
  const double flo = f(lo), fmid = f(mid), fhi = f(hi);
  const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
  return adapt(f, lo, mid, hi, flo, fmid, fhi, whole, tol, 48);
}

// P(X_s < a, rho x > a along X_t = rho X_s): the sandwich collapses onto one
// interval of the X_s axis.
double degenerate_prob(double a, double rho, double sd) {
  if (rho > 0.0) {
    const double other = a / rho;
    if (other >= a) return 0.0;
    return norm_cdf(a / sd) - norm_cdf(other / sd);
  }
  if (rho == 0.0) return a > 0.0 ? 0.0 : norm_cdf(a / sd);
  return norm_cdf(std::min(a, a / rho) / sd);
}

double sq(double x) { return x * x; }

// raw (constant-free) bound terms; i4 needs no constant at all
struct RawTerms {
  BoundCase which = BoundCase::case_i;
  double i1 = 0.0, i2 = 0.0, i3 = 0.0, i4 = 0.0;
};

RawTerms raw_terms(const CrossingGeometry& g, double a) {
  require(g.R_ts > 0.0, "crossing bound needs strictly positive covariance");
  require(g.V_star <= 1.0 + 1e-12,
          "crossing bound needs variance supremum at most one; rescale the "
          "process by 1/sqrt(V*) first");
  const double sigma = std::sqrt(g.sigma2);
  const double sv = std::sqrt(g.R_ss);

  RawTerms r;
  r.i1 = std::min(sv * sigma, g.sigma2) * std::exp(-0.5 * sq(a));
  if (g.ratio * (a - 1.0) - a >= 0.0) {
    r.which = BoundCase::case_ii;
    return r;
  }
  r.which = BoundCase::case_i;
  const double near = std::exp(-std::min(sq(a), sq(a - 1.0)) / (2.0 * g.V_star));
  const double bracket =
      std::fabs(a) > 2.0 ? 1.0 : a - g.ratio * (a - 1.0);
  r.i2 = near * (sigma / sv) * bracket;
  r.i3 = g.ratio * (sigma / sv) * near;
  r.i4 = std::exp(-sq(a) / (2.0 * g.V_star)) / sv *
         std::fabs(a * (1.0 - g.ratio));
  return r;
}

}  // namespace

double variance_sup(const gauss::CovarianceModel& m) {
  switch (m.kind) {
    case gauss::CovarianceModel::Kind::fbm:
      return std::pow(m.horizon, 2.0 * m.hurst);
    case gauss::CovarianceModel::Kind::stationary:
      return m.r(0.0);
    case gauss::CovarianceModel::Kind::martingale:
      return m.bracket(m.horizon);
  }
  return 0.0;
}

CrossingGeometry crossing_geometry(const gauss::CovarianceModel& m, double s,
                                   double t) {
  check_pair(m, s, t, true);
  const auto k = gauss::eval_kernel(m, s, t);
  require(k.Vs > 0.0, "crossing needs R(s,s) > 0");

  CrossingGeometry g;
  g.R_ss = k.Vs;
  g.R_tt = k.Vt;
  g.R_ts = k.R;
  g.W = k.W;
  g.sigma2 = std::max(0.0, (k.Vs * k.Vt - k.R * k.R) / k.Vs);
  g.sigma_bar2 = g.sigma2 <= 0.0 || k.R == 0.0
                     ? 0.0
                     : 1.0 / (1.0 / g.sigma2 + k.Vs / (k.R * k.R));
  g.ratio = k.R != 0.0 ? k.Vs / k.R : 0.0;
  g.V_star = variance_sup(m);
  return g;
}

double exact_crossing_prob(const gauss::CovarianceModel& m, double s, double t,
                           double a) {
  check_pair(m, s, t, false);
  const auto k = gauss::eval_kernel(m, s, t);
  require(k.Vs > 0.0, "crossing needs R(s,s) > 0");

  const double sd = std::sqrt(k.Vs);
  const double rho = k.R / k.Vs;  // conditional slope of X_t on X_s
  const double sigma2 = std::max(0.0, (k.Vs * k.Vt - k.R * k.R) / k.Vs);
  if (sigma2 == 0.0) return degenerate_prob(a, rho, sd);

  const double sigma = std::sqrt(sigma2);
  const auto integrand = [&](double x) {
    return norm_tail((a - rho * x) / sigma) * kInvSqrt2Pi / sd *
           std::exp(-0.5 * sq(x / sd));
  };
  // all conditioning mass lives within 12 standard deviations of zero
  const double lo = std::min(a, -12.0 * sd);
  return std::clamp(integrate(integrand, lo, a, 1e-9), 0.0, 1.0);
}

McEstimate mc_crossing_prob(const gauss::CovarianceModel& m, double s,
                            double t, double a, std::size_t n_samples,
                            std::uint64_t seed) {
  check_pair(m, s, t, false);
  require(n_samples >= 1000, "crossing Monte-Carlo needs at least 1000 samples");
  const auto k = gauss::eval_kernel(m, s, t);
  require(k.Vs > 0.0, "crossing needs R(s,s) > 0");

  const double sd = std::sqrt(k.Vs);
  const double rho = k.R / k.Vs;
  const double sigma =
      std::sqrt(std::max(0.0, (k.Vs * k.Vt - k.R * k.R) / k.Vs));

  constexpr std::size_t kBlock = 8192;
  std::normal_distribution<double> gauss01;
  std::size_t hits = 0;
  for (std::size_t done = 0, block = 0; done < n_samples; ++block) {
    auto eng = substream(seed, block);
    const std::size_t batch = std::min(kBlock, n_samples - done);
    for (std::size_t i = 0; i < batch; ++i) {
      const double xs = sd * gauss01(eng);
      const double xt = rho * xs + sigma * gauss01(eng);
      hits += (xs < a && a < xt) ? 1 : 0;
    }
    done += batch;
  }

  McEstimate e;
  e.n = n_samples;
  e.estimate = static_cast<double>(hits) / static_cast<double>(n_samples);
  e.se = std::sqrt(e.estimate * (1.0 - e.estimate) /
                   static_cast<double>(n_samples));
  return e;
}

double tail_bound(double a) {
  require(a > 0.0, "tail bound needs a > 0");
  return std::exp(-0.5 * sq(a)) / (std::sqrt(2.0 * kPi) * a);
}

const char* case_name(BoundCase c) {
  return c == BoundCase::case_i ? "case_i" : "case_ii";
}

BoundReport crossing_bound(const gauss::CovarianceModel& m, double s, double t,
                           double a, double constant) {
  const auto g = crossing_geometry(m, s, t);
  check_pair(m, s, t, false);
  const auto r = raw_terms(g, a);

  BoundReport rep;
  rep.which = r.which;
  rep.i1 = constant * r.i1;
  rep.i2 = constant * r.i2;
  rep.i3 = constant * r.i3;
  rep.i4 = r.i4;
  rep.total = rep.i1 + rep.i2 + rep.i3 + rep.i4;
  rep.probability = exact_crossing_prob(m, s, t, a);
  rep.satisfied = rep.probability <= rep.total;
  return rep;
}

double universal_bound(const gauss::CovarianceModel& m, double s, double t,
                       double a, double constant) {
  const auto g = crossing_geometry(m, s, t);
  check_pair(m, s, t, false);
  require(g.R_ts > 0.0, "crossing bound needs strictly positive covariance");
  require(g.V_star <= 1.0 + 1e-12,
          "crossing bound needs variance supremum at most one; rescale the "
          "process by 1/sqrt(V*) first");
  const double sv = std::sqrt(g.R_ss);
  return constant * std::sqrt(g.W) / sv *
         (1.0 + g.ratio +
          std::fabs(a) * std::exp(-sq(a) / (2.0 * g.V_star)) / sv *
              std::max(1.0, g.ratio));
}

RatioCheck ratio_inequality_check(const gauss::CovarianceModel& m, double s,
                                  double t) {
  check_pair(m, s, t, true);
  const auto k = gauss::eval_kernel(m, s, t);
  require(k.Vs > 0.0, "crossing needs R(s,s) > 0");
  require(k.R > 0.0, "ratio inequality needs strictly positive covariance");

  RatioCheck c;
  c.first_branch = k.Vs <= k.R;
  const double ratio = k.Vs / k.R;
  const double w_over_v = std::sqrt(k.W) / std::sqrt(k.Vs);
  if (c.first_branch) {
    c.lhs = 1.0 - ratio;
    c.rhs = w_over_v;
  } else {
    c.lhs = ratio - 1.0;
    c.rhs = w_over_v * ratio;
  }
  c.pass = c.lhs <= c.rhs + 1e-12 * (1.0 + std::fabs(c.rhs));
  return c;
}

ConstantRequirement required_constants(const gauss::CovarianceModel& m,
                                       const std::vector<double>& times,
                                       const std::vector<double>& levels) {
  ConstantRequirement req;
  for (double s : times) {
    for (double t : times) {
      if (!(s < t)) continue;
      const auto g = crossing_geometry(m, s, t);
      const double sv = std::sqrt(g.R_ss);
      for (double a : levels) {
        const double prob = exact_crossing_prob(m, s, t, a);
        const auto r = raw_terms(g, a);
        const double with_c = r.i1 + r.i2 + r.i3;
        if (with_c > 0.0)
          req.four_term =
              std::max(req.four_term, (prob - r.i4) / with_c);
        const double uni =
            std::sqrt(g.W) / sv *
            (1.0 + g.ratio +
             std::fabs(a) * std::exp(-sq(a) / (2.0 * g.V_star)) / sv *
                 std::max(1.0, g.ratio));
        if (uni > 0.0) req.universal = std::max(req.universal, prob / uni);
        ++req.points;
      }
    }
  }
  return req;
}

}  // namespace pathint::cross
