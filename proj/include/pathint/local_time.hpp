#pragma once
#include <cstddef>
#include <functional>
#include <vector>

#include "pathint/gaussian.hpp"
#include "pathint/path.hpp"

// Local time with respect to the quadratic-variation clock: the window
// estimator L_t^a ~ (1/2eps) sum 1_{|Y_u - a| < eps} d<Y>_u, the occupation
// time formula it should satisfy, and the double-integral criterion that
// decides whether a Gaussian model has local times at all.

namespace pathint::ltime {

// L^a_t on a level grid x the full path grid, cumulative in time (row-major
// by level).  undersmoothed is set when the window is narrower than the
// path's typical one-step move, where the indicator starts missing
// crossings between samples.
struct LocalTimeField {
  std::vector<double> levels;  // strictly increasing
  std::vector<double> times;   // the path grid
  std::vector<double> values;  // levels.size() * times.size(), row-major
  double bandwidth = 0.0;
  bool undersmoothed = false;

  double at(std::size_t level, std::size_t time) const {
    return values[level * times.size() + time];
  }
};

// Window half-width 2 * sqrt(mean grid spacing) * (increment std per unit
// sqrt-time) = twice the path's typical one-step move: wide enough that
// window passages span several samples, narrow enough that the 1/(2eps)
// amplification stays controlled.  Zero for constant paths (callers must
// reject it; the estimator needs eps > 0).
double default_bandwidth(const SampledPath& y);

// 81 levels spanning [min Y - 3 eps, max Y + 3 eps].
std::vector<double> default_levels(const SampledPath& y, double epsilon);

// Left-endpoint Riemann-Stieltjes sum of the window indicator against the
// clock increments, divided by 2 eps.  The clock must live on the same grid
// as the path; epsilon must be positive; levels strictly increasing.
LocalTimeField estimate_local_time(const SampledPath& y, const BracketPath& clock,
                                   const std::vector<double>& levels,
                                   double epsilon);

// Terminal value L_T^a alone (the ensemble hot path); dclock[j] is the clock
// increment over cell j and cells = points - 1.
double local_time_at_horizon(const double* y, const double* dclock,
                             std::size_t cells, double level, double epsilon);
double local_time_at_horizon(const SampledPath& y, const BracketPath& clock,
                             double level, double epsilon);

// | int g(a) L_T^a da  -  int_0^T g(Y_u) d<Y>_u |, the left side by
// trapezoid over the field's levels, the right side a left-endpoint clock
// sum.  The level grid must cover the path's range.
double occupation_residual(const SampledPath& y, const BracketPath& clock,
                           const std::function<double(double)>& g,
                           const LocalTimeField& field);

// Double integral of 1/sqrt(E[(X_t - X_s)^2]) over [0,T]^2: finite iff the
// model carries local times (square-integrable occupation densities).
// Midpoint rule away from the diagonal; the diagonal band is integrated in
// closed form against the locally fitted power W ~ C |t-s|^p per cell.
// diverged is set when W vanishes somewhere off the diagonal or the local
// exponent reaches the non-integrable regime.
struct BermanReport {
  double value = 0.0;
  bool diverged = false;
  std::size_t grid = 0;
};

BermanReport berman_integral(const gauss::CovarianceModel& model, double horizon,
                             std::size_t n);

}  // namespace pathint::ltime
