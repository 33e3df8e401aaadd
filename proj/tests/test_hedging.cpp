#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "pathint/gaussian.hpp"
#include "pathint/hedging.hpp"
#include "pathint/integrators.hpp"
#include "pathint/path.hpp"

using namespace pathint;

namespace {

gauss::MixedModel standard_mixed() {
  gauss::MixedModel spec;
  spec.bracket = [](double t) { return t; };
  spec.hurst = 0.8;
  return spec;
}

BracketPath zero_clock(const std::vector<double>& grid) {
  return BracketPath{grid, std::vector<double>(grid.size(), 0.0)};
}

double median_of(std::vector<double> v) {
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  return v[v.size() / 2];
}

}  // namespace

TEST_CASE("price paths follow the exponential formula") {
  const auto grid = uniform_grid(1.0, 1 << 8);
  const SampledPath flat(grid, std::vector<double>(grid.size(), 0.0));

  // no driver, no drift: the price never moves
  const auto still = hedge::price_path(flat, zero_clock(grid), {}, 2.5);
  for (double s : still.S.x()) CHECK(s == 2.5);

  // constant drift integrates exactly under the trapezoid rule
  const auto drifted =
      hedge::price_path(flat, zero_clock(grid), [](double) { return 0.05; }, 1.0);
  CHECK(std::fabs(drifted.S.x().back() - std::exp(0.05)) <= 1e-12);

  // a zero bracket leaves the plain exponential of the driver
  const auto paths = gauss::sample_paths(
      gauss::CovarianceModel::fractional(0.75, 1.0), grid, 1, 3);
  const auto sp = hedge::price_path(paths[0], zero_clock(grid), {}, 1.0);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(sp.S.x()[i] == std::exp(paths[0].x()[i]));

  CHECK(hedge::rebuild_error(sp) == 0.0);

  // tampering with the stored prices is caught by the rebuild check
  auto tampered = sp;
  auto vals = tampered.S.x();
  vals[10] *= 1.0 + 1e-6;
  tampered.S = tampered.S.with_values(std::move(vals));
  CHECK(hedge::rebuild_error(tampered) > 1e-10);

  CHECK_THROWS_AS(hedge::price_path(flat, zero_clock(grid), {}, 0.0),
                  std::invalid_argument);
  const auto other = uniform_grid(1.0, 1 << 7);
  CHECK_THROWS_AS(hedge::price_path(flat, zero_clock(other), {}, 1.0),
                  std::invalid_argument);
}

TEST_CASE("exponential Brownian prices keep their starting mean") {
  const auto grid = uniform_grid(1.0, 1 << 12);
  const auto paths = gauss::sample_paths(
      gauss::CovarianceModel::fractional(0.5, 1.0), grid, 400, 21);
  const BracketPath clock{grid, grid};
  double sum = 0.0, sumsq = 0.0;
  for (const auto& y : paths) {
    const double sT = hedge::price_path(y, clock, {}, 1.0).S.x().back();
    sum += sT;
    sumsq += sT * sT;
  }
  const double mean = sum / 400.0;
  const double sd = std::sqrt((sumsq / 400.0 - mean * mean) * 400.0 / 399.0);
  CHECK(std::fabs(mean - 1.0) <= 3.0 * sd / std::sqrt(400.0));
}

TEST_CASE("the threshold ledger finances itself exactly") {
  const auto grid = uniform_grid(1.0, 1 << 12);
  const auto ens = gauss::sample_mixed(standard_mixed(), grid, 2, 41);
  const auto part = uniform_grid(1.0, 1 << 10);

  for (const auto& e : ens) {
    const auto sp = hedge::price_path(e.y, e.bracket, {}, 1.0);
    const auto led = hedge::stop_loss_pnl(sp, 1.0, part);

    CHECK(led.times.size() == part.size());
    CHECK(led.initial_cost == 0.0);  // started exactly at the strike? no:
    // S(0) = 1 = K, so the ledger opens in the money with zero premium
    CHECK(led.position.front() == 1);
    CHECK(!led.trades.empty());
    CHECK(led.trades.front().side == +1);

    // cash moves only by signed trade values, position stays in {0, 1}
    std::size_t trade_at = 0;
    double cash = led.initial_cost;
    for (std::size_t j = 0; j < led.times.size(); ++j) {
      while (trade_at < led.trades.size() &&
             led.trades[trade_at].time <= led.times[j]) {
        cash -= led.trades[trade_at].side * led.trades[trade_at].price;
        ++trade_at;
      }
      CHECK(led.cash[j] == cash);
      CHECK((led.position[j] == 0 || led.position[j] == 1));
    }

    // terminal wealth is the initial capital plus the forward-sum gains
    std::vector<double> ind(sp.S.points());
    for (std::size_t i = 0; i < ind.size(); ++i)
      ind[i] = sp.S.x()[i] >= 1.0 ? 1.0 : 0.0;
    const double gains =
        integ::rs_forward_sum(sp.S.with_values(std::move(ind)), sp.S, part);
    CHECK(std::fabs(led.terminal_wealth - led.initial_cost - gains) <= 1e-9);
  }
}

TEST_CASE("a strike above the path leaves the ledger empty") {
  const auto grid = uniform_grid(1.0, 1 << 10);
  const auto paths = gauss::sample_paths(
      gauss::CovarianceModel::fractional(0.5, 1.0), grid, 1, 5);
  const auto sp = hedge::price_path(paths[0], BracketPath{grid, grid}, {}, 1.0);
  const double high =
      2.0 * *std::max_element(sp.S.x().begin(), sp.S.x().end());

  const auto led = hedge::stop_loss_pnl(sp, high, sp.S.t());
  CHECK(led.trades.empty());
  CHECK(led.initial_cost == 0.0);
  CHECK(led.terminal_wealth == 0.0);

  const auto rep = hedge::replication_report(
      sp, high, integ::PartitionSequence::dyadic(1.0, 6, 10));
  CHECK(rep.payoff == 0.0);
  CHECK(rep.initial == 0.0);
  CHECK(rep.gains == 0.0);
  CHECK(rep.half_local_time == 0.0);
  CHECK(rep.residual == 0.0);
}

TEST_CASE("without quadratic variation the naive strategy replicates") {
  // the out-of-the-money paradox: under refinement the threshold strategy
  // funds the call from nothing
  const auto grid = uniform_grid(1.0, 1 << 14);
  const auto paths = gauss::sample_paths(
      gauss::CovarianceModel::fractional(0.8, 1.0), grid, 64, 9);
  double prev = 1e9;
  for (std::size_t lg : {10, 12, 14}) {
    const auto part = uniform_grid(1.0, std::size_t{1} << lg);
    double acc = 0.0;
    for (const auto& y : paths) {
      const auto sp = hedge::price_path(y, zero_clock(grid), {}, 1.0);
      const auto led = hedge::stop_loss_pnl(sp, 1.2, part);
      acc += std::fabs(led.terminal_wealth -
                       std::max(sp.S.x().back() - 1.2, 0.0));
    }
    const double mean = acc / 64.0;
    CHECK(mean < prev);
    prev = mean;
  }
  CHECK(prev <= 2e-3);
}

TEST_CASE("cutout scans count completed round trips only") {
  const auto t = uniform_grid(1.0, 4);
  auto path_of = [&](std::vector<double> v) {
    return hedge::PricePath{SampledPath(t, std::move(v)),
                            SampledPath(t, std::vector<double>(5, 0.0)),
                            zero_clock(t),
                            {},
                            1.0};
  };

  // one up-crossing, never sold: no completed trip
  const auto up = path_of({0.5, 0.7, 0.9, 1.1, 1.3});
  CHECK(hedge::cutout_costs(up, 1.0, 0.25).round_trips == 0);
  CHECK(hedge::cutout_costs(up, 1.0, 0.25).total == 0.0);

  // never in reach of the strike: nothing happens
  const auto low = path_of({0.5, 0.6, 0.55, 0.6, 0.5});
  CHECK(hedge::cutout_costs(low, 1.0, 0.25).round_trips == 0);

  // two full buy-sell cycles at eps = 0.5
  const auto osc = path_of({0.5, 1.1, 0.4, 1.2, 0.3});
  const auto tally = hedge::cutout_costs(osc, 1.0, 0.5);
  CHECK(tally.round_trips == 2);
  CHECK(tally.total == 1.0);

  CHECK_THROWS_AS(hedge::cutout_costs(up, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(hedge::cutout_costs(up, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("cutout totals close in on the half local time") {
  const auto grid = uniform_grid(1.0, 1 << 14);
  const auto ens = gauss::sample_mixed(standard_mixed(), grid, 200, 41);
  const auto seq = integ::PartitionSequence::dyadic(1.0, 9, 14);
  const double K = 1.2;

  std::vector<hedge::PricePath> sps;
  double hl = 0.0;
  for (const auto& e : ens) {
    sps.push_back(hedge::price_path(e.y, e.bracket, {}, 1.0));
    const auto rep = hedge::replication_report(sps.back(), K, seq);
    CHECK(rep.half_local_time >= 0.0);
    hl += rep.half_local_time;
  }

  double prev = 1e9;
  for (double eps : {1.0, 0.5, 0.25}) {
    double tot = 0.0;
    for (const auto& sp : sps) tot += hedge::cutout_costs(sp, K, eps).total;
    const double gap = std::fabs(tot / hl - 1.0);
    CHECK(gap < prev);  // shrinking the band tightens the match
    prev = gap;
  }
  CHECK(prev <= 0.25);
}

TEST_CASE("the replication identity carries the half-local-time correction") {
  const auto grid = uniform_grid(1.0, 1 << 14);
  const auto ens = gauss::sample_mixed(standard_mixed(), grid, 100, 41);

  double prev_ratio = 1e9;
  for (std::size_t lg : {12, 14}) {
    const auto seq = integ::PartitionSequence::dyadic(1.0, 9, lg);
    std::vector<double> res, hl, shortfall;
    for (const auto& e : ens) {
      const auto sp = hedge::price_path(e.y, e.bracket, {}, 1.0);
      const auto rep = hedge::replication_report(sp, 1.0, seq);
      CHECK(rep.residual ==
            rep.payoff - rep.initial - rep.gains - rep.half_local_time);
      CHECK(rep.half_local_time >= 0.0);
      CHECK(rep.bandwidth > 0.0);
      res.push_back(std::fabs(rep.residual));
      hl.push_back(rep.half_local_time);
      shortfall.push_back(rep.payoff - rep.initial - rep.gains);
    }
    const double ratio = median_of(res) / median_of(hl);
    CHECK(ratio < prev_ratio);  // sharper on the finer grid
    prev_ratio = ratio;
    if (lg == 14) {
      CHECK(ratio <= 0.125);
      // the naive strategy's shortfall is the half local time
      CHECK(std::fabs(median_of(shortfall) - median_of(hl)) <=
            0.10 * median_of(hl));
    }
  }
}

TEST_CASE("replication reports zero local time for zero-bracket drivers") {
  const auto grid = uniform_grid(1.0, 1 << 12);
  const auto paths = gauss::sample_paths(
      gauss::CovarianceModel::fractional(0.75, 1.0), grid, 1, 7);
  const auto sp = hedge::price_path(paths[0], zero_clock(grid), {}, 1.0);
  const auto rep = hedge::replication_report(
      sp, 1.0, integ::PartitionSequence::dyadic(1.0, 8, 12));
  CHECK(rep.half_local_time == 0.0);
  CHECK(rep.bandwidth == 0.0);
  CHECK(rep.residual == rep.payoff - rep.initial - rep.gains);
}
