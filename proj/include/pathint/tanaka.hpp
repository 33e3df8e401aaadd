#pragma once
#include <cstddef>
#include <functional>
#include <string>

#include "pathint/convex.hpp"
#include "pathint/gaussian.hpp"
#include "pathint/integrators.hpp"
#include "pathint/path.hpp"

// Change-of-variable identities along sampled paths.  Smooth functions obey
// the chain rule with a quadratic-variation correction; convex functions
// replace that correction by the local-time field paired with the curvature
// measure; a strictly monotone map g transports the same identity to the
// transformed path S = g(X).  Everything here works one path at a time and
// reports the identity's pieces together with the leftover, exactly as
// computed.

namespace pathint::tanaka {

// f, f' and f'' as plain callables; the second derivative is consulted only
// when a clock is supplied.
struct SmoothFn {
  std::function<double(double)> value;
  std::function<double(double)> deriv;
  std::function<double(double)> second;
};

enum class IntegralMethod { follmer, gls, mixed };
const char* method_name(IntegralMethod m);

// Window and level grid for the local-time term, plus whether the pairing
// integral runs as a cross-check on the forward sum.  alpha and eta describe
// the integrand's regularity class and the integrator's Hoelder exponent;
// when they admit no pairing order the cross-check is skipped with a notice
// rather than failing the report.
struct LocalTimeConfig {
  double bandwidth = 0.0;        // window half-width; <= 0 picks the default
  std::size_t level_count = 81;  // level-grid resolution across the range
  bool gls_cross_check = false;
  double alpha = 0.5;
  double eta = 0.5;
};

struct TanakaReport {
  double lhs = 0.0;       // f(Y_T) - f(Y_0)
  double integral = 0.0;  // forward sum over the finest partition
  IntegralMethod method = IntegralMethod::follmer;
  double lt_term = 0.0;   // local-time field against the curvature measure
  double residual = 0.0;  // lhs - integral - lt_term, exactly
  double scale = 0.0;     // max(|lhs|, |lt_term|, payoff scale on the path)
  double relative_residual = 0.0;  // |residual| / scale, 0 when scale is 0
  std::size_t grid_cells = 0;      // cells of the finest partition level
  double bandwidth = 0.0;          // local-time window (0 when no such term)
  bool gls_checked = false;        // pairing cross-check ran
  double gls_value = 0.0;          // its value when it did
  std::string notice;              // skip reasons and cross-check warnings
};

// Residual of the smooth identity f(X_T) - f(X_0) = sum f'(X) dX
// (+ 1/2 sum f''(X) dC when a clock C on the path's grid is supplied), both
// sums left-endpoint over the finest partition of seq.
double ito_residual_smooth(const SmoothFn& f, const SampledPath& x,
                           const integ::PartitionSequence& seq,
                           const BracketPath* clock = nullptr);

// Convex identity on a martingale-plus-smooth path: forward sum of the left
// derivative against Y, plus the window local time (clocked by the
// ensemble's bracket) integrated against the curvature measure -- atoms by
// linear interpolation of the terminal field between levels, the density
// part by trapezoid across the level grid.
TanakaReport tanaka_residual(const convex::ConvexCombination& f,
                             const gauss::MixedEnsemble& ens,
                             const integ::PartitionSequence& seq,
                             const LocalTimeConfig& cfg = {});

// Same identity for S = g(X) with g strictly monotone across the path range
// (verified against its inverse; violations throw).  The smooth-path
// overload carries no local-time term -- it presumes regularity above one
// half -- while the mixed overload estimates one with the clock taken from
// S's squared increments.  A stop rule truncates the integrand
// (integ::truncate_at) and every term is evaluated on [0, tau].
TanakaReport transformed_residual(const convex::MonotoneMap& g,
                                  const convex::ConvexCombination& f,
                                  const SampledPath& x,
                                  const integ::PartitionSequence& seq,
                                  const integ::StopRule* stop = nullptr,
                                  const LocalTimeConfig& cfg = {});
TanakaReport transformed_residual(const convex::MonotoneMap& g,
                                  const convex::ConvexCombination& f,
                                  const gauss::MixedEnsemble& ens,
                                  const integ::PartitionSequence& seq,
                                  const integ::StopRule* stop = nullptr,
                                  const LocalTimeConfig& cfg = {});

}  // namespace pathint::tanaka
