#include "pathint/hedging.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pathint/local_time.hpp"

namespace pathint::hedge {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

// partition times resolved to grid indices, with the same tolerance the
// forward sums use
std::vector<std::size_t> locate(const std::vector<double>& grid,
                                const std::vector<double>& part) {
  require(part.size() >= 2 && part.front() == 0.0, "partition must start at 0");
  const double tol = 1e-9 * std::max(1.0, grid.back());
  require(std::fabs(part.back() - grid.back()) <= tol,
          "partition must end at the path horizon");
  std::vector<std::size_t> idx(part.size());
  for (std::size_t j = 0; j < part.size(); ++j) {
    auto it = std::lower_bound(grid.begin(), grid.end(), part[j] - tol);
    require(it != grid.end() && std::fabs(*it - part[j]) <= tol,
            "partition point not on the price grid");
    idx[j] = static_cast<std::size_t>(it - grid.begin());
    require(j == 0 || idx[j] > idx[j - 1], "partition must increase strictly");
  }
  return idx;
}

}  // namespace

PricePath price_path(const SampledPath& y, const BracketPath& bracket,
                     const std::function<double(double)>& mu, double S0) {
  require(S0 > 0.0, "price path needs a positive starting value");
  bracket.validate();
  require(bracket.t == y.t(), "price clock and driver must share one grid");

  const auto& t = y.t();
  std::vector<double> s(y.points());
  double drift = 0.0;
  double mu_prev = mu ? mu(t[0]) : 0.0;
  s[0] = S0 * std::exp(y.x()[0]);
  for (std::size_t i = 1; i < s.size(); ++i) {
    const double mu_here = mu ? mu(t[i]) : 0.0;
    drift += 0.5 * (t[i] - t[i - 1]) * (mu_prev + mu_here);
    mu_prev = mu_here;
    s[i] = S0 * std::exp(drift + y.x()[i] - 0.5 * bracket.v[i]);
  }

  return PricePath{y.with_values(std::move(s), "price"), y, bracket, mu, S0};
}

double rebuild_error(const PricePath& sp) {
  const auto rebuilt = price_path(sp.y, sp.bracket, sp.mu, sp.S0);
  double worst = 0.0;
  for (std::size_t i = 0; i < sp.S.points(); ++i)
    worst = std::max(worst, std::fabs(rebuilt.S.x()[i] - sp.S.x()[i]) /
                                std::max(1e-300, std::fabs(sp.S.x()[i])));
  return worst;
}

HedgeLedger stop_loss_pnl(const PricePath& sp, double K,
                          const std::vector<double>& partition) {
  require(K > 0.0, "threshold strategy needs a positive strike");
  const auto idx = locate(sp.S.t(), partition);
  const auto& s = sp.S.x();
  const std::size_t m = idx.size();

  HedgeLedger led;
  led.times = partition;
  led.position.resize(m);
  led.cash.resize(m);
  led.initial_cost = std::max(s[idx[0]] - K, 0.0);

  int pos = s[idx[0]] >= K ? 1 : 0;
  double cash = led.initial_cost - pos * s[idx[0]];
  if (pos == 1) led.trades.push_back({partition[0], +1, s[idx[0]]});
  led.position[0] = pos;
  led.cash[0] = cash;

  // rebalance at interior times; the final position rides to maturity
  for (std::size_t j = 1; j + 1 < m; ++j) {
    const int want = s[idx[j]] >= K ? 1 : 0;
    if (want != pos) {
      led.trades.push_back({partition[j], want - pos, s[idx[j]]});
      cash -= (want - pos) * s[idx[j]];
      pos = want;
    }
    led.position[j] = pos;
    led.cash[j] = cash;
  }
  led.position[m - 1] = pos;
  led.cash[m - 1] = cash;
  led.terminal_wealth = cash + pos * s[idx[m - 1]];
  return led;
}

CutoutTally cutout_costs(const PricePath& sp, double K, double eps) {
  require(eps > 0.0, "cutout needs a positive band width");
  require(eps < K, "cutout band must stay below the strike");

  CutoutTally tally;
  bool hold = sp.S.x()[0] >= K;
  for (double s : sp.S.x()) {
    if (!hold && s >= K) {
      hold = true;
    } else if (hold && s <= K - eps) {
      hold = false;
      ++tally.round_trips;
    }
  }
  tally.total = eps * static_cast<double>(tally.round_trips);
  return tally;
}

ReplicationReport replication_report(const PricePath& sp, double K,
                                     const integ::PartitionSequence& seq,
                                     const ReplicationConfig& cfg) {
  require(K > 0.0, "replication needs a positive strike");
  seq.validate();
  const auto& fine = seq.levels.back();

  const auto& s = sp.S.x();
  std::vector<double> ind(sp.S.points());
  for (std::size_t i = 0; i < ind.size(); ++i) ind[i] = s[i] >= K ? 1.0 : 0.0;

  ReplicationReport rep;
  rep.payoff = std::max(s.back() - K, 0.0);
  rep.initial = std::max(s.front() - K, 0.0);
  rep.gains = integ::rs_forward_sum(sp.S.with_values(std::move(ind)), sp.S, fine);

  if (sp.bracket.v.back() > 0.0) {
    // price observed at the partition resolution, clocked by its own
    // squared increments over the same points
    auto [clock, record] = integ::quadratic_variation(sp.S, seq);
    const auto idx = locate(sp.S.t(), fine);
    std::vector<double> sub(idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j) sub[j] = s[idx[j]];
    const SampledPath observed(clock.t, std::move(sub), sp.S.seed(), "price");
    const double eps = cfg.bandwidth > 0.0 ? cfg.bandwidth
                                           : ltime::default_bandwidth(observed);
    require(eps > 0.0, "local-time window degenerated to zero width");
    rep.bandwidth = eps;
    rep.half_local_time =
        0.5 * ltime::local_time_at_horizon(observed, clock, K, eps);
  }

  rep.residual = rep.payoff - rep.initial - rep.gains - rep.half_local_time;
  return rep;
}

}  // namespace pathint::hedge
