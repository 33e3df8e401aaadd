#pragma once
#include <cstddef>
#include <functional>
#include <vector>

#include "pathint/integrators.hpp"
#include "pathint/path.hpp"

// Discounted price paths driven by a quadratic-variation process, the
// stop-loss-start-gain strategy ledger, limit-order cutout costs, and the
// replication identity with its half-local-time correction.

namespace pathint::hedge {

// S_t = S0 exp( int_0^t mu du + Y_t - <Y>_t / 2 ), kept together with the
// drivers that built it so every consumer can reach the clock and the
// starting value.
struct PricePath {
  SampledPath S;
  SampledPath y;
  BracketPath bracket;  // <Y> on the same grid as Y and S
  std::function<double(double)> mu;
  double S0 = 1.0;
};

// Exponential formula applied pointwise, the drift integrated by trapezoid.
// Requires S0 > 0 and the bracket aligned with the driver's grid.
PricePath price_path(const SampledPath& y, const BracketPath& bracket,
                     const std::function<double(double)>& mu, double S0);

// Largest relative gap between the stored prices and the exponential
// formula recomputed from the drivers; zero up to rounding for any path
// built by price_path.
double rebuild_error(const PricePath& sp);

struct Trade {
  double time = 0.0;
  int side = 0;  // +1 buy, -1 sell
  double price = 0.0;
};

// Self-financing ledger of the threshold strategy: position changes only at
// partition times, cash changes only by signed trade values.
struct HedgeLedger {
  std::vector<double> times;
  std::vector<int> position;  // shares held from times[i] to times[i+1]
  std::vector<double> cash;   // account right after rebalancing at times[i]
  std::vector<Trade> trades;
  double initial_cost = 0.0;     // (S(0) - K)^+, capital committed at zero
  double terminal_wealth = 0.0;  // cash + position * S(T)
};

// Hold one share whenever the price sits at or above the strike, rebalancing
// at the partition times and trading at the partition-time price.  A path
// starting in the money opens with one share bought at the start price, so
// terminal wealth always equals initial cost plus the forward-sum gains.
// Requires K > 0 and a partition drawn from the price grid.
HedgeLedger stop_loss_pnl(const PricePath& sp, double K,
                          const std::vector<double>& partition);

struct CutoutTally {
  double total = 0.0;  // eps * completed round trips
  std::size_t round_trips = 0;
};

// Limit-order pairs "buy at K, sell at K - eps": scan the price grid for
// completed round trips.  Crossings between grid points are invisible, which
// undercounts at coarse grids.  Requires 0 < eps < K.
CutoutTally cutout_costs(const PricePath& sp, double K, double eps);

struct ReplicationConfig {
  double bandwidth = 0.0;  // 0 -> default window from the price increments
};

// The call-replication identity at strike K:
//   payoff = initial + gains + half_local_time + residual,
// with gains the forward sum of the in-the-money indicator against the price
// over the finest partition and half_local_time from the window estimator of
// the price's own local time, clocked by the pathwise quadratic variation of
// the price over the same partition.  A zero driver bracket announces a path
// with no quadratic variation, so the local-time term is exactly zero there.
struct ReplicationReport {
  double payoff = 0.0;
  double initial = 0.0;
  double gains = 0.0;
  double half_local_time = 0.0;
  double residual = 0.0;
  double bandwidth = 0.0;
};

ReplicationReport replication_report(const PricePath& sp, double K,
                                     const integ::PartitionSequence& seq,
                                     const ReplicationConfig& cfg = {});

}  // namespace pathint::hedge
