#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "pathint/crossing.hpp"
#include "pathint/gaussian.hpp"
#include "pathint/rng.hpp"

using namespace pathint;

namespace {

gauss::CovarianceModel bm(double horizon = 1.0) {
  return gauss::CovarianceModel::fractional(0.5, horizon);
}

gauss::CovarianceModel exp_stationary() {
  return gauss::CovarianceModel::stationary_r(
      [](double u) { return std::exp(-u); }, 1.0, "exp");
}

std::vector<double> lin(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i)
    v[i] = a + (b - a) * static_cast<double>(i) / (n - 1);
  return v;
}

}  // namespace

TEST_CASE("pair geometry matches the closed forms on Brownian motion") {
  const auto g = cross::crossing_geometry(bm(), 0.5, 1.0);
  CHECK(std::fabs(g.R_ss - 0.5) <= 1e-15);
  CHECK(std::fabs(g.R_tt - 1.0) <= 1e-15);
  CHECK(std::fabs(g.R_ts - 0.5) <= 1e-15);
  CHECK(std::fabs(g.W - 0.5) <= 1e-15);
  CHECK(std::fabs(g.sigma2 - 0.5) <= 1e-15);
  // 1/sigma_bar^2 = 1/sigma^2 + R_ss/R_ts^2 = 2 + 2
  CHECK(std::fabs(g.sigma_bar2 - 0.25) <= 1e-15);
  CHECK(std::fabs(g.ratio - 1.0) <= 1e-15);
  CHECK(g.V_star == 1.0);
  CHECK(g.V_star >= std::max(g.R_ss, g.R_tt));
}

TEST_CASE("exact crossing probability reproduces bivariate-normal values") {
  // frozen against an independent bivariate-normal quadrature
  CHECK(std::fabs(cross::exact_crossing_prob(bm(2.0), 1.0, 2.0, 0.0) - 0.125) <= 1e-8);
  CHECK(std::fabs(cross::exact_crossing_prob(bm(), 0.3, 0.7, 0.2) -
                  0.155280618682) <= 1e-8);
  const auto f03 = gauss::CovarianceModel::fractional(0.3, 1.0);
  CHECK(std::fabs(cross::exact_crossing_prob(f03, 0.4, 0.8, -0.5) -
                  0.099794877513) <= 1e-8);
  const auto f075 = gauss::CovarianceModel::fractional(0.75, 1.0);
  CHECK(std::fabs(cross::exact_crossing_prob(f075, 0.25, 0.9, 0.1) -
                  0.161861920773) <= 1e-8);
  CHECK(std::fabs(cross::exact_crossing_prob(exp_stationary(), 0.2, 0.6, 0.5) -
                  0.116528251980) <= 1e-8);
}

TEST_CASE("levels far above the path are never crossed") {
  CHECK(cross::exact_crossing_prob(bm(), 0.5, 1.0, 10.0) <= 1e-10);
}

TEST_CASE("a flat correlation pins the two marginals together") {
  // r identically one makes X_t = X_s almost surely: no strict sandwich
  const auto flat = gauss::CovarianceModel::stationary_r(
      [](double) { return 1.0; }, 1.0, "flat");
  CHECK(cross::exact_crossing_prob(flat, 0.3, 0.8, 0.2) == 0.0);
  const auto mc = cross::mc_crossing_prob(flat, 0.3, 0.8, 0.2, 2000, 3);
  CHECK(mc.estimate == 0.0);
  CHECK(cross::universal_bound(flat, 0.3, 0.8, 0.2) == 0.0);
}

TEST_CASE("Monte-Carlo estimates agree with quadrature") {
  const auto mc = cross::mc_crossing_prob(bm(2.0), 1.0, 2.0, 0.0, 100000, 11);
  CHECK(mc.n == 100000);
  CHECK(std::fabs(mc.estimate - 0.125) <= 3.0 * mc.se);

  // deterministic per seed
  const auto again = cross::mc_crossing_prob(bm(2.0), 1.0, 2.0, 0.0, 100000, 11);
  CHECK(again.estimate == mc.estimate);

  // small grid across two models
  for (const auto& m : {bm(), exp_stationary()})
    for (double s : {0.2, 0.5})
      for (double t : {0.6, 0.9})
        for (double a : {-0.4, 0.0, 0.7}) {
          const double p = cross::exact_crossing_prob(m, s, t, a);
          const auto e = cross::mc_crossing_prob(m, s, t, a, 20000, 17);
          CHECK(std::fabs(e.estimate - p) <= 3.0 * e.se + 1e-9);
        }

  CHECK_THROWS_AS(cross::mc_crossing_prob(bm(), 0.2, 0.8, 0.0, 999, 1),
                  std::invalid_argument);
}

TEST_CASE("crossing down through the mirrored level matches by symmetry") {
  // P(X_s > -a > X_t) for a centered process equals P(X_s < a < X_t);
  // estimate the former by direct simulation against the latter's quadrature
  const auto m = gauss::CovarianceModel::fractional(0.3, 1.0);
  const double s = 0.35, t = 0.85, a = 0.4;
  const double up = cross::exact_crossing_prob(m, s, t, a);
  const auto k = gauss::eval_kernel(m, s, t);
  const double sd = std::sqrt(k.Vs);
  const double rho = k.R / k.Vs;
  const double sigma = std::sqrt((k.Vs * k.Vt - k.R * k.R) / k.Vs);
  auto eng = substream(29, 0);
  std::normal_distribution<double> z;
  const int n = 200000;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    const double xs = sd * z(eng);
    const double xt = rho * xs + sigma * z(eng);
    hits += (xs > -a && -a > xt) ? 1 : 0;
  }
  const double down = static_cast<double>(hits) / n;
  const double se = std::sqrt(down * (1.0 - down) / n);
  CHECK(std::fabs(down - up) <= 3.0 * se);
}

TEST_CASE("Gaussian tail estimate dominates and sharpens") {
  CHECK(std::fabs(cross::tail_bound(1.0) - 0.2419707245) <= 1e-9);
  const auto tail = [](double a) { return 0.5 * std::erfc(a / std::sqrt(2.0)); };
  for (double a : {0.5, 1.0, 2.0, 3.0, 5.0}) CHECK(cross::tail_bound(a) >= tail(a));
  CHECK(cross::tail_bound(3.0) >= 0.001349898032);
  CHECK(std::fabs(cross::tail_bound(3.0) - 0.001477282804) <= 1e-9);
  CHECK(cross::tail_bound(5.0) / tail(5.0) <= 1.06);
  CHECK_THROWS_AS(cross::tail_bound(0.0), std::invalid_argument);
  CHECK_THROWS_AS(cross::tail_bound(-1.0), std::invalid_argument);
}

TEST_CASE("four-term bound splits into the two lemma cases") {
  // covariance ratio one keeps Brownian motion in the first case everywhere
  const auto rep = cross::crossing_bound(bm(), 0.3, 0.7, 0.5);
  CHECK(rep.which == cross::BoundCase::case_i);
  CHECK(rep.total >= rep.i1);
  CHECK(rep.total >= rep.i2);
  CHECK(rep.total >= rep.i3);
  CHECK(rep.total >= rep.i4);
  CHECK(rep.satisfied);

  // a large level against a decaying correlation flips to the single term
  const auto rep2 = cross::crossing_bound(exp_stationary(), 0.1, 0.9, 2.0);
  CHECK(rep2.which == cross::BoundCase::case_ii);
  CHECK(rep2.i2 == 0.0);
  CHECK(rep2.i3 == 0.0);
  CHECK(rep2.i4 == 0.0);
  CHECK(rep2.total == rep2.i1);
  CHECK(rep2.satisfied);

  // the constant-free term vanishes with the level
  const auto rep3 = cross::crossing_bound(bm(), 0.3, 0.7, 0.0);
  CHECK(rep3.i4 == 0.0);

  CHECK(std::string(cross::case_name(cross::BoundCase::case_i)) == "case_i");
  CHECK(std::string(cross::case_name(cross::BoundCase::case_ii)) == "case_ii");
}

TEST_CASE("bounds demand a variance supremum of at most one") {
  CHECK_THROWS_WITH_AS(cross::crossing_bound(bm(2.0), 0.5, 1.5, 0.3),
                       doctest::Contains("rescale"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(cross::universal_bound(bm(2.0), 0.5, 1.5, 0.3),
                       doctest::Contains("rescale"), std::invalid_argument);
}

TEST_CASE("calibrated constants dominate on a held-out grid") {
  const auto times = lin(0.12, 0.88, 7);
  const std::vector<double> levels = {-1.9, -0.9, -0.35, 0.15, 0.55, 1.3, 2.6};
  const std::vector<gauss::CovarianceModel> models = {
      bm(), gauss::CovarianceModel::fractional(0.3, 1.0),
      gauss::CovarianceModel::fractional(0.75, 1.0), exp_stationary()};
  for (const auto& m : models)
    for (double s : times)
      for (double t : times) {
        if (!(s < t)) continue;
        for (double a : levels) {
          const auto rep = cross::crossing_bound(m, s, t, a);
          CHECK(rep.satisfied);
          CHECK(rep.probability <= cross::universal_bound(m, s, t, a));
        }
      }
}

TEST_CASE("shipped constants carry the calibration safety margin") {
  const auto times = lin(0.05, 0.95, 10);
  const std::vector<double> levels = {-3.0, -2.0, -1.5, -1.0, -0.5, -0.25, 0.0,
                                      0.25, 0.5,  1.0,  1.5,  2.0,  3.0};
  double four = 0.0, uni = 0.0;
  for (const auto& m :
       {bm(), gauss::CovarianceModel::fractional(0.3, 1.0),
        gauss::CovarianceModel::fractional(0.75, 1.0), exp_stationary()}) {
    const auto req = cross::required_constants(m, times, levels);
    CHECK(req.points == 585);
    four = std::max(four, req.four_term);
    uni = std::max(uni, req.universal);
  }
  CHECK(cross::kFourTermConstant >= 1.099 * four);
  CHECK(cross::kUniversalConstant >= 1.099 * uni);
  // and the margin is genuine: the raw requirement alone would not pass
  CHECK(four > 0.2);
  CHECK(uni > 0.05);
}

TEST_CASE("ratio inequality holds on both branches") {
  const auto at = cross::ratio_inequality_check(bm(), 0.4, 0.4);
  CHECK(at.pass);
  CHECK(at.lhs == 0.0);
  CHECK(std::fabs(at.rhs) <= 1e-15);

  for (const auto& m : {bm(), gauss::CovarianceModel::fractional(0.3, 1.0)})
    for (double s : lin(0.05, 1.0, 12))
      for (double t : lin(0.05, 1.0, 12)) {
        if (s > t) continue;
        CHECK(cross::ratio_inequality_check(m, s, t).pass);
      }

  // the decaying kernel exercises the second branch
  const auto second = cross::ratio_inequality_check(exp_stationary(), 0.1, 0.9);
  CHECK(!second.first_branch);
  CHECK(second.pass);
}

TEST_CASE("crossing operations validate their time pairs") {
  CHECK_THROWS_AS(cross::exact_crossing_prob(bm(), 0.7, 0.3, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(cross::exact_crossing_prob(bm(), 0.0, 0.5, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(cross::exact_crossing_prob(bm(), 0.5, 1.5, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(cross::crossing_bound(bm(), 0.5, 0.5, 0.0),
                  std::invalid_argument);
}
