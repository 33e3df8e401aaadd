#include "pathint/local_time.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pathint/simd/kernels.hpp"

namespace pathint::ltime {
namespace {

void check_clock(const SampledPath& y, const BracketPath& clock) {
  clock.validate();
  if (clock.t != y.t())
    throw std::invalid_argument("clock and path must share one grid");
}

std::vector<double> clock_increments(const BracketPath& clock) {
  std::vector<double> d(clock.v.size() - 1);
  for (std::size_t j = 0; j + 1 < clock.v.size(); ++j)
    d[j] = clock.v[j + 1] - clock.v[j];
  return d;
}

}  // namespace

double increment_std(const SampledPath& y) {
  const std::size_t m = y.cells();
  double mean = 0.0;
  for (std::size_t j = 0; j < m; ++j) mean += y.x()[j + 1] - y.x()[j];
  mean /= m;
  double ss = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double d = (y.x()[j + 1] - y.x()[j]) - mean;
    ss += d * d;
  }
  return m > 1 ? std::sqrt(ss / (m - 1)) : 0.0;
}

double default_bandwidth(const SampledPath& y) {
  // Twice the typical one-step move: the per-unit-sqrt-time increment std
  // rescaled by the root mean spacing.  A window much narrower than one step
  // charges whole cells to a level the path only grazes (the start cell at
  // the starting level alone would bias the estimate by h/(2 eps)); a much
  // wider one smears the 1/(2 eps) density over distant levels.
  const double mean_spacing = (y.t().back() - y.t().front()) / y.cells();
  const double unit_sd = increment_std(y) / std::sqrt(mean_spacing);
  return 2.0 * std::sqrt(mean_spacing) * unit_sd;
}

std::vector<double> default_levels(const SampledPath& y, double epsilon) {
  const auto [lo, hi] = std::minmax_element(y.x().begin(), y.x().end());
  const double a = *lo - 3.0 * epsilon;
  const double b = *hi + 3.0 * epsilon;
  std::vector<double> levels(81);
  for (std::size_t k = 0; k < levels.size(); ++k)
    levels[k] = a + (b - a) * static_cast<double>(k) / (levels.size() - 1);
  return levels;
}

LocalTimeField estimate_local_time(const SampledPath& y, const BracketPath& clock,
                                   const std::vector<double>& levels,
                                   double epsilon) {
  check_clock(y, clock);
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw std::invalid_argument("local-time bandwidth must be positive");
  if (levels.empty())
    throw std::invalid_argument("local-time level grid must not be empty");
  for (std::size_t k = 0; k + 1 < levels.size(); ++k)
    if (!(levels[k] < levels[k + 1]))
      throw std::invalid_argument("local-time levels must be strictly increasing");

  const std::size_t n = y.points();
  const auto dclock = clock_increments(clock);
  const double scale = 1.0 / (2.0 * epsilon);

  LocalTimeField field;
  field.levels = levels;
  field.times = y.t();
  field.values.assign(levels.size() * n, 0.0);
  field.bandwidth = epsilon;
  // Undersmoothed when the window resolves below the path's own spatial
  // resolution (the typical move per grid step): the indicator then misses
  // most crossings between samples.
  field.undersmoothed = epsilon < increment_std(y);

  for (std::size_t k = 0; k < levels.size(); ++k) {
    double* row = field.values.data() + k * n;
    const double lo = levels[k] - epsilon;
    const double hi = levels[k] + epsilon;
    double acc = 0.0;
    row[0] = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
      const double v = y.x()[j];
      if (v > lo && v < hi) acc += dclock[j];
      row[j + 1] = acc * scale;
    }
  }
  return field;
}

double local_time_at_horizon(const double* y, const double* dclock,
                             std::size_t cells, double level, double epsilon) {
  const auto& K = kernels::active();
  return K.masked_clock_sum(y, dclock, cells, level - epsilon, level + epsilon) /
         (2.0 * epsilon);
}

double local_time_at_horizon(const SampledPath& y, const BracketPath& clock,
                             double level, double epsilon) {
  check_clock(y, clock);
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw std::invalid_argument("local-time bandwidth must be positive");
  const auto dclock = clock_increments(clock);
  return local_time_at_horizon(y.x().data(), dclock.data(), y.cells(), level,
                               epsilon);
}

double occupation_residual(const SampledPath& y, const BracketPath& clock,
                           const std::function<double(double)>& g,
                           const LocalTimeField& field) {
  check_clock(y, clock);
  if (!g) throw std::invalid_argument("occupation residual needs a callable g");
  const auto [lo, hi] = std::minmax_element(y.x().begin(), y.x().end());
  if (field.levels.empty() || field.levels.front() > *lo ||
      field.levels.back() < *hi)
    throw std::invalid_argument(
        "local-time level grid does not cover the path range");

  const std::size_t n = y.points();
  const std::size_t last = n - 1;

  double left = 0.0;
  for (std::size_t k = 0; k + 1 < field.levels.size(); ++k) {
    const double da = field.levels[k + 1] - field.levels[k];
    left += 0.5 * da *
            (g(field.levels[k]) * field.at(k, last) +
             g(field.levels[k + 1]) * field.at(k + 1, last));
  }

  double right = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j)
    right += g(y.x()[j]) * (clock.v[j + 1] - clock.v[j]);

  return std::fabs(left - right);
}

BermanReport berman_integral(const gauss::CovarianceModel& model, double horizon,
                             std::size_t n) {
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (n < 8) throw std::invalid_argument("berman grid needs at least 8 cells");

  BermanReport report;
  report.grid = n;
  const double h = horizon / static_cast<double>(n);
  const double inf = std::numeric_limits<double>::infinity();

  // Midpoint rule over the off-diagonal cells (the integrand is finite and
  // smooth there); symmetry in (s,t) halves the work.
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = (static_cast<double>(i) + 0.5) * h;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = (static_cast<double>(j) + 0.5) * h;
      const double w = gauss::eval_kernel(model, t, s).W;
      if (!(w > 0.0)) {
        report.value = inf;
        report.diverged = true;
        return report;
      }
      acc += 2.0 / std::sqrt(w);
    }
  }
  acc *= h * h;

  // Diagonal cells: fit W ~ C u^p at each cell from lags h and h/2, then
  // integrate 1/sqrt(C u^p) over the cell in closed form,
  //   2 C^{-1/2} h^{2-p/2} / ((1-p/2)(2-p/2)).
  for (std::size_t i = 0; i < n; ++i) {
    const double t0 = static_cast<double>(i) * h;
    const double base = std::min(t0, horizon - h);  // keep lag-h pair in range
    const double w1 = gauss::eval_kernel(model, base, base + h).W;
    const double w2 = gauss::eval_kernel(model, base, base + 0.5 * h).W;
    if (!(w1 > 0.0) || !(w2 > 0.0)) {
      report.value = inf;
      report.diverged = true;
      return report;
    }
    const double p = std::log2(w1 / w2);
    const double half = 0.5 * p;
    if (half >= 1.0) {  // local exponent too steep: non-integrable singularity
      report.value = inf;
      report.diverged = true;
      return report;
    }
    const double c = w1 / std::pow(h, p);
    acc += 2.0 / std::sqrt(c) * std::pow(h, 2.0 - half) /
           ((1.0 - half) * (2.0 - half));
  }

  report.value = acc;
  return report;
}

}  // namespace pathint::ltime
