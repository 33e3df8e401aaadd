#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pathint/gaussian.hpp"
#include "pathint/integrators.hpp"
#include "pathint/path.hpp"

using namespace pathint;
using integ::PartitionSequence;
using integ::StopRule;

namespace {

SampledPath fn_path(std::size_t cells, double horizon, double (*fn)(double)) {
  auto t = uniform_grid(horizon, cells);
  std::vector<double> x(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) x[i] = fn(t[i]);
  return SampledPath(std::move(t), std::move(x));
}

SampledPath fbm_path(double hurst, std::size_t cells, std::uint64_t seed) {
  auto model = gauss::CovarianceModel::fractional(hurst, 1.0);
  return gauss::sample_paths(model, uniform_grid(1.0, cells), 1, seed)[0];
}

}  // namespace

TEST_CASE("dyadic partition sequences validate and nest") {
  auto seq = PartitionSequence::dyadic(1.0, 4, 8);
  CHECK(seq.levels.size() == 5);
  CHECK_NOTHROW(seq.validate());

  auto broken = seq;
  std::swap(broken.levels[1], broken.levels[3]);  // meshes no longer decrease
  CHECK_THROWS_AS(broken.validate(), std::invalid_argument);

  PartitionSequence not_nested;
  not_nested.levels = {{0.0, 0.3, 1.0}, {0.0, 0.4, 0.7, 1.0}};
  not_nested.nested = false;
  CHECK_NOTHROW(not_nested.validate());
  not_nested.nested = true;  // 0.3 is missing from the finer level
  CHECK_THROWS_AS(not_nested.validate(), std::invalid_argument);
}

TEST_CASE("forward sums: classics and error paths") {
  const std::size_t n = 1 << 12;
  auto id = fn_path(n, 1.0, [](double t) { return t; });
  auto c = fn_path(n, 1.0, [](double) { return 2.5; });

  CHECK(integ::rs_forward_sum(c, id, id.t()) == doctest::Approx(2.5).epsilon(1e-13));
  // left sums of s ds undershoot by h/2
  CHECK(integ::rs_forward_sum(id, id, id.t()) ==
        doctest::Approx(0.5 - 0.5 / n).epsilon(1e-12));

  auto other_grid = fn_path(n / 2, 1.0, [](double t) { return t; });
  CHECK_THROWS_AS(integ::rs_forward_sum(id, other_grid, id.t()),
                  std::invalid_argument);
  CHECK_THROWS_AS(integ::rs_forward_sum(id, id, std::vector<double>{0.0, 0.33, 1.0}),
                  std::invalid_argument);
}

TEST_CASE("forward sum equals the telescoped square identity on rough paths") {
  auto w = fbm_path(0.5, 1 << 12, 99);
  auto [bracket, rec] = integ::quadratic_variation(
      w, PartitionSequence::dyadic(1.0, 12, 12));
  const double fs = integ::rs_forward_sum(w, w, w.t());
  const double wt = w.x().back();
  CHECK(fs == doctest::Approx(0.5 * (wt * wt - rec.final_value)).epsilon(1e-12));
}

TEST_CASE("pairing integral reproduces smooth classics") {
  const std::size_t n = 1 << 12;
  auto id = fn_path(n, 1.0, [](double t) { return t; });
  auto sq = fn_path(n, 1.0, [](double t) { return t * t; });
  auto ones = fn_path(n, 1.0, [](double) { return 1.0; });

  for (double b : {0.3, 0.5, 0.7}) {
    CAPTURE(b);
    auto r = integ::gls_integral(id, id, b);
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(std::fabs(r.value) <= r.bound + 1e-6 * (1.0 + r.bound));
  }
  CHECK(integ::gls_integral(ones, id, 0.4).value ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(integ::gls_integral(sq, id, 0.4).value ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-3));
  // shifted integrand: the constant rides on the exact part
  auto shifted = fn_path(n, 1.0, [](double t) { return 3.0 + t; });
  CHECK(integ::gls_integral(shifted, id, 0.4).value ==
        doctest::Approx(3.5).epsilon(1e-3));
}

TEST_CASE("pairing integral is linear in the integrand") {
  const std::size_t n = 1 << 10;
  auto g = fbm_path(0.8, n, 4);
  auto f1 = fn_path(n, 1.0, [](double t) { return std::sin(3.0 * t); });
  auto f2 = fn_path(n, 1.0, [](double t) { return t * t; });
  std::vector<double> combo(f1.points());
  for (std::size_t i = 0; i < combo.size(); ++i)
    combo[i] = 2.0 * f1.x()[i] - 3.0 * f2.x()[i];
  auto fc = f1.with_values(std::move(combo));

  const double b = 0.35;
  const double lhs = integ::gls_integral(fc, g, b).value;
  const double rhs = 2.0 * integ::gls_integral(f1, g, b).value -
                     3.0 * integ::gls_integral(f2, g, b).value;
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("pairing integral agrees with forward sums on a rough integrator") {
  const std::size_t n = 1 << 12;
  auto g = fbm_path(0.8, n, 1);
  std::vector<double> s(g.points());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::sin(g.x()[i]);
  auto f = g.with_values(std::move(s));

  const double rs = integ::rs_forward_sum(f, g, f.t());
  REQUIRE(std::fabs(rs) > 0.5);  // this seed yields a well-scaled integral
  const double scale = std::fabs(rs);
  auto r03 = integ::gls_integral(f, g, 0.3);
  auto r04 = integ::gls_integral(f, g, 0.4);
  CHECK(r03.feasible);
  CHECK(r04.feasible);
  CHECK(std::fabs(r04.value - rs) <= 0.01 * scale);
  CHECK(std::fabs(r03.value - r04.value) <= 0.01 * scale);  // order invariance
  CHECK(std::fabs(r03.value) <= r03.bound + 1e-6 * (1.0 + r03.bound));
  CHECK(std::fabs(r04.value) <= r04.bound + 1e-6 * (1.0 + r04.bound));
}

TEST_CASE("follmer record: zero integrand, smooth rate, decreasing meshes") {
  const std::size_t n = 1 << 12;
  auto id = fn_path(n, 1.0, [](double t) { return t; });
  auto zero = fn_path(n, 1.0, [](double) { return 0.0; });
  auto seq = PartitionSequence::dyadic(1.0, 4, 12);

  auto zr = integ::follmer_limit(zero, id, seq);
  for (double v : zr.values) CHECK(v == 0.0);

  auto rec = integ::follmer_limit(id, id, seq);
  CHECK(rec.final_value == doctest::Approx(0.5).epsilon(1e-3));
  for (std::size_t l = 1; l < rec.meshes.size(); ++l)
    CHECK(rec.meshes[l] < rec.meshes[l - 1]);
  // left-sum error is h/2, so the fitted rate sits near 1
  CHECK(rec.fitted_rate == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("quadratic variation of standard, smooth, and mixed paths") {
  auto seq = PartitionSequence::dyadic(1.0, 6, 14);

  auto w = fbm_path(0.5, 1 << 14, 2024);
  auto [bw, rw] = integ::quadratic_variation(w, seq);
  CHECK(std::fabs(rw.final_value - 1.0) <= 0.05);
  for (std::size_t i = 1; i < bw.v.size(); ++i) CHECK(bw.v[i] >= bw.v[i - 1]);

  auto x = fbm_path(0.75, 1 << 14, 77);
  auto [bx, rx] = integ::quadratic_variation(x, seq);
  CHECK(rx.final_value <= 0.02);

  gauss::MixedModel mm;
  mm.bracket = [](double t) { return t; };
  mm.hurst = 0.8;
  auto ens = gauss::sample_mixed(mm, uniform_grid(1.0, 1 << 14), 1, 5);
  auto [by, ry] = integ::quadratic_variation(ens[0].y, seq);
  CHECK(std::fabs(ry.final_value - 1.0) <= 0.07);
}

TEST_CASE("stop rules truncate forward in time") {
  auto t = uniform_grid(1.0, 4);
  SampledPath p(t, {0.0, 2.0, 1.0, 3.0, 4.0});

  auto same = integ::truncate_at(p, StopRule::at(1.0));
  CHECK(same.x() == p.x());

  auto never = integ::truncate_at(p, StopRule::hit(10.0));
  CHECK(never.x() == p.x());
  CHECK(integ::resolve_stop_time(p, StopRule::hit(10.0)) == 1.0);

  auto hit = integ::truncate_at(p, StopRule::hit(1.5));
  CHECK(integ::resolve_stop_time(p, StopRule::hit(1.5)) == 0.25);
  CHECK(hit.x() == std::vector<double>{0.0, 2.0, 0.0, 0.0, 0.0});

  auto below = integ::truncate_at(p, StopRule::hit(0.5, false));
  CHECK(below.x()[0] == 0.0);  // hit immediately at t=0
  CHECK(below.x()[1] == 0.0);
}

TEST_CASE("admissible pairing orders") {
  auto [lo, hi] = integ::feasible_beta(0.8, 0.8);
  CHECK(lo == doctest::Approx(0.2));
  CHECK(hi == doctest::Approx(0.8));
  CHECK(integ::default_gls_beta(0.8, 0.8) == doctest::Approx(0.5));
  // 3a-1 bites for small class indices
  CHECK(integ::default_gls_beta(0.55, 0.9) ==
        doctest::Approx(0.5 * (0.1 + 0.55)));
  CHECK_THROWS_AS(integ::default_gls_beta(0.4, 0.5), std::invalid_argument);
}
