#pragma once
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "pathint/path.hpp"

// Pathwise integrals: left-endpoint forward Riemann sums along partition
// sequences (with convergence tracking), the fractional-derivative pairing
// integral with its a-priori bound, quadratic variation, and stopped
// truncation of integrands.

namespace pathint::integ {

struct PartitionSequence {
  std::vector<std::vector<double>> levels;  // partitions of [0,T], coarse to fine
  bool nested = false;

  // uniform dyadic refinement: 2^coarse_log2 ... 2^fine_log2 cells
  static PartitionSequence dyadic(double horizon, std::size_t coarse_log2,
                                  std::size_t fine_log2);
  void validate() const;  // monotone meshes; nesting when claimed
};

// forward sum of f against g over the partition points (subset of the
// common grid of f and g)
double rs_forward_sum(const SampledPath& f, const SampledPath& g,
                      const std::vector<double>& partition);

struct GlsResult {
  double value = 0.0;
  double bound = 0.0;  // sup |D^{1-b} g_{T-}| * ||f||_{2,b}
  double beta = 0.0;
  std::size_t grid_cells = 0;
  bool feasible = true;   // false when a norm estimate looks divergent
  std::string warning;    // human-readable reason when !feasible
};

// Pairing integral: the integrand's fractional derivative of order b against
// the integrator's right-sided derivative of order 1-b.  The constant part
// f(0) integrates exactly to f(0)*(g(T)-g(0)); the rest is paired by
// trapezoid with a power-law closed form for the cell adjacent to T, where
// the integrator derivative can spike.  The value does not depend on b for
// admissible inputs; the attached bound always dominates |value|.
GlsResult gls_integral(const SampledPath& f, const SampledPath& g, double beta);

struct ConvergenceRecord {
  std::vector<double> values;  // one per level
  std::vector<double> meshes;
  double final_value = 0.0;    // finest level
  double fitted_rate = 0.0;    // log-log slope of |value - final| vs mesh
};

ConvergenceRecord follmer_limit(const SampledPath& f, const SampledPath& g,
                                const PartitionSequence& seq);

// bracket at the finest level plus the per-level record of <X>_T
std::pair<BracketPath, ConvergenceRecord> quadratic_variation(
    const SampledPath& x, const PartitionSequence& seq);

struct StopRule {
  enum class Kind { deterministic, first_hit };
  Kind kind = Kind::deterministic;
  double when = 0.0;       // deterministic stop time
  double level = 0.0;      // first_hit threshold
  bool from_below = true;  // hit when the path rises to the level

  static StopRule at(double t);
  static StopRule hit(double level, bool from_below = true);
};

// first grid time satisfying the rule, or T when never satisfied
double resolve_stop_time(const SampledPath& x, const StopRule& rule);

// integrand values multiplied by the indicator of t <= stop time
SampledPath truncate_at(const SampledPath& f, const StopRule& rule);

// Feasible pairing orders for integrands of the form f'(X) with X in the
// alpha regularity class, against an integrator of Hoelder exponent eta:
// the open interval (1 - eta, min(alpha, 3*alpha - 1)).  lo >= hi means
// empty.  default_gls_beta picks the midpoint and throws when empty.
std::pair<double, double> feasible_beta(double alpha, double eta);
double default_gls_beta(double alpha, double eta);

}  // namespace pathint::integ
