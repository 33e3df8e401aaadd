#include "pathint/tanaka.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "pathint/local_time.hpp"

namespace pathint::tanaka {
namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

SampledPath map_values(const SampledPath& p,
                       const std::function<double(double)>& fn) {
  std::vector<double> v(p.points());
  for (std::size_t i = 0; i < p.points(); ++i) v[i] = fn(p.x()[i]);
  return p.with_values(std::move(v));
}

SampledPath left_derivative_path(const convex::ConvexCombination& f,
                                 const SampledPath& s) {
  std::vector<double> v(s.points());
  for (std::size_t i = 0; i < s.points(); ++i)
    v[i] = f.left_derivative(s.x()[i]);
  return s.with_values(std::move(v));
}

// g strictly monotone and inverse-consistent across the path's value range;
// probed on a fixed grid like the curvature pushforward does.
void check_monotone(const convex::MonotoneMap& g, const SampledPath& x) {
  require(static_cast<bool>(g.forward) && static_cast<bool>(g.inverse),
          "change of variable needs forward and inverse");
  const auto [plo, phi] = std::minmax_element(x.x().begin(), x.x().end());
  double lo = *plo, hi = *phi;
  if (!(lo < hi)) {
    const double pad = 1e-4 * (1.0 + std::fabs(lo));
    lo -= pad;
    hi += pad;
  }
  constexpr std::size_t kProbe = 128;
  std::array<double, kProbe + 1> probe{};
  double prev = 0.0;
  int dir = 0;
  for (std::size_t k = 0; k <= kProbe; ++k) {
    const double u = lo + (hi - lo) * static_cast<double>(k) / kProbe;
    const double v = g.forward(u);
    require(std::isfinite(v), "change of variable is not finite on the path range");
    probe[k] = v;
    if (k > 0) {
      const int step = v > prev ? 1 : (v < prev ? -1 : 0);
      require(step != 0 && (dir == 0 || step == dir),
              "change of variable is not strictly monotone over the path range");
      dir = step;
    }
    prev = v;
  }
  for (std::size_t k = 0; k <= kProbe; ++k) {
    const double u = lo + (hi - lo) * static_cast<double>(k) / kProbe;
    const double back = g.inverse(probe[k]);
    require(std::fabs(back - u) <= 1e-8 * (1.0 + std::fabs(u)),
            "change of variable inverse is inconsistent with forward");
  }
}

// last grid index reached before the rule stops the path (cells() when the
// rule never binds or none is given)
std::size_t stop_index(const SampledPath& s, const integ::StopRule* stop) {
  if (!stop) return s.cells();
  const double tau = integ::resolve_stop_time(s, *stop);
  std::size_t j = 0;
  while (j + 1 < s.points() && s.t()[j + 1] <= tau) ++j;
  return j;
}

// forward sum of the (possibly truncated) integrand; cells at or past the
// stop index contribute nothing
double follmer_term(const SampledPath& ipath, const SampledPath& s,
                    const std::vector<double>& fine, std::size_t jstar) {
  if (jstar == 0) return 0.0;
  if (jstar >= s.cells()) return integ::rs_forward_sum(ipath, s, fine);
  const auto trunc =
      integ::truncate_at(ipath, integ::StopRule::at(s.t()[jstar - 1]));
  return integ::rs_forward_sum(trunc, s, fine);
}

double sample_std(const std::vector<double>& d, std::size_t n) {
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (std::size_t j = 0; j < n; ++j) mean += d[j];
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double c = d[j] - mean;
    ss += c * c;
  }
  return std::sqrt(ss / static_cast<double>(n - 1));
}

std::vector<double> level_grid(double lo, double hi, double eps,
                               std::size_t count) {
  require(count >= 2, "level grid needs at least two levels");
  const double a = lo - 3.0 * eps;
  const double b = hi + 3.0 * eps;
  std::vector<double> levels(count);
  for (std::size_t k = 0; k < count; ++k)
    levels[k] = a + (b - a) * static_cast<double>(k) /
                        static_cast<double>(count - 1);
  return levels;
}

// terminal local time linearly interpolated between levels; zero outside
// the level hull (the grid pads the path range, so nothing lives out there)
double interp_level(const std::vector<double>& levels,
                    const std::vector<double>& vals, double a) {
  if (a < levels.front() || a > levels.back()) return 0.0;
  const auto it = std::upper_bound(levels.begin(), levels.end(), a);
  if (it == levels.end()) return vals.back();
  const std::size_t k = static_cast<std::size_t>(it - levels.begin());
  if (k == 0) return vals.front();
  const double w = (a - levels[k - 1]) / (levels[k] - levels[k - 1]);
  return (1.0 - w) * vals[k - 1] + w * vals[k];
}

double density_at(const convex::PiecewiseDensity& rho, double a) {
  if (rho.empty()) return 0.0;
  const auto it =
      std::upper_bound(rho.breakpoints.begin(), rho.breakpoints.end(), a);
  if (it == rho.breakpoints.begin() || it == rho.breakpoints.end()) return 0.0;
  return rho.values[static_cast<std::size_t>(it - rho.breakpoints.begin()) - 1];
}

// curvature measure against a terminal local-time slice: atoms interpolate,
// the density pairs by trapezoid over the level grid
double measure_pairing(const convex::ConvexCombination& f,
                       const std::vector<double>& levels,
                       const std::vector<double>& tail) {
  double acc = 0.0;
  for (const auto& atom : f.atoms)
    acc += atom.weight * interp_level(levels, tail, atom.location);
  if (!f.density.empty()) {
    double tr = 0.0;
    for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
      const double g0 = density_at(f.density, levels[k]) * tail[k];
      const double g1 = density_at(f.density, levels[k + 1]) * tail[k + 1];
      tr += 0.5 * (levels[k + 1] - levels[k]) * (g0 + g1);
    }
    acc += tr;
  }
  return acc;
}

std::vector<double> terminal_slice(const ltime::LocalTimeField& field) {
  std::vector<double> tail(field.levels.size());
  for (std::size_t k = 0; k < tail.size(); ++k)
    tail[k] = field.at(k, field.times.size() - 1);
  return tail;
}

bool has_curvature(const convex::ConvexCombination& f) {
  return !f.atoms.empty() || !f.density.empty();
}

double payoff_scale(const convex::ConvexCombination& f, const SampledPath& s,
                    std::size_t jstar) {
  double ps = 0.0;
  for (std::size_t j = 0; j <= jstar; ++j)
    ps = std::max(ps, std::fabs(f.value(s.x()[j])));
  return ps;
}

void add_notice(TanakaReport& rep, const std::string& msg) {
  if (!rep.notice.empty()) rep.notice += "; ";
  rep.notice += msg;
}

void finalize(TanakaReport& rep, double scale_hint) {
  rep.residual = rep.lhs - rep.integral - rep.lt_term;
  rep.scale = std::max({std::fabs(rep.lhs), std::fabs(rep.lt_term), scale_hint});
  rep.relative_residual =
      rep.scale > 0.0 ? std::fabs(rep.residual) / rep.scale : 0.0;
}

// optional pairing-integral cross-check on the forward sum; an empty
// admissible order interval downgrades to a notice instead of an error
void run_cross_check(TanakaReport& rep, const SampledPath& ipath,
                     const SampledPath& s, const LocalTimeConfig& cfg) {
  if (!cfg.gls_cross_check) return;
  double beta = 0.0;
  try {
    beta = integ::default_gls_beta(cfg.alpha, cfg.eta);
  } catch (const std::invalid_argument& e) {
    add_notice(rep, std::string("pairing cross-check skipped: ") + e.what());
    return;
  }
  const auto gr = integ::gls_integral(ipath, s, beta);
  rep.gls_checked = true;
  rep.gls_value = gr.value;
  rep.method = IntegralMethod::mixed;
  if (!gr.feasible)
    add_notice(rep, "pairing cross-check flagged: " + gr.warning);
}

}  // namespace

const char* method_name(IntegralMethod m) {
  switch (m) {
    case IntegralMethod::follmer:
      return "follmer";
    case IntegralMethod::gls:
      return "gls";
    case IntegralMethod::mixed:
      return "mixed";
  }
  return "unknown";
}

double ito_residual_smooth(const SmoothFn& f, const SampledPath& x,
                           const integ::PartitionSequence& seq,
                           const BracketPath* clock) {
  require(static_cast<bool>(f.value) && static_cast<bool>(f.deriv),
          "smooth identity needs f and its derivative");
  seq.validate();
  const auto& fine = seq.levels.back();

  double res = f.value(x.x().back()) - f.value(x.x().front()) -
               integ::rs_forward_sum(map_values(x, f.deriv), x, fine);
  if (clock != nullptr) {
    require(static_cast<bool>(f.second),
            "clock correction needs the second derivative");
    clock->validate();
    require(clock->t == x.t(), "clock and path must share one grid");
    const SampledPath cpath = x.with_values(clock->v);
    res -= 0.5 * integ::rs_forward_sum(map_values(x, f.second), cpath, fine);
  }
  return res;
}

TanakaReport tanaka_residual(const convex::ConvexCombination& f,
                             const gauss::MixedEnsemble& ens,
                             const integ::PartitionSequence& seq,
                             const LocalTimeConfig& cfg) {
  seq.validate();
  const SampledPath& y = ens.y;
  const auto& fine = seq.levels.back();

  TanakaReport rep;
  rep.grid_cells = fine.size() - 1;
  rep.lhs = f.value(y.x().back()) - f.value(y.x().front());
  const SampledPath ipath = left_derivative_path(f, y);
  rep.integral = integ::rs_forward_sum(ipath, y, fine);

  if (has_curvature(f)) {
    const double eps =
        cfg.bandwidth > 0.0 ? cfg.bandwidth : ltime::default_bandwidth(y);
    require(eps > 0.0, "local-time window degenerated to zero width");
    const auto [lo, hi] = std::minmax_element(y.x().begin(), y.x().end());
    const auto levels = level_grid(*lo, *hi, eps, cfg.level_count);
    const auto field = ltime::estimate_local_time(y, ens.bracket, levels, eps);
    rep.bandwidth = eps;
    rep.lt_term = measure_pairing(f, levels, terminal_slice(field));
    if (field.undersmoothed)
      add_notice(rep, "local-time window is narrower than a one-step move");
  }

  finalize(rep, payoff_scale(f, y, y.cells()));
  run_cross_check(rep, ipath, y, cfg);
  return rep;
}

TanakaReport transformed_residual(const convex::MonotoneMap& g,
                                  const convex::ConvexCombination& f,
                                  const SampledPath& x,
                                  const integ::PartitionSequence& seq,
                                  const integ::StopRule* stop,
                                  const LocalTimeConfig& cfg) {
  seq.validate();
  check_monotone(g, x);
  const SampledPath s = map_values(x, g.forward);
  const auto& fine = seq.levels.back();
  const std::size_t jstar = stop_index(s, stop);

  TanakaReport rep;
  rep.grid_cells = fine.size() - 1;
  rep.lhs = f.value(s.x()[jstar]) - f.value(s.x().front());
  const SampledPath ipath = left_derivative_path(f, s);
  rep.integral = follmer_term(ipath, s, fine, jstar);

  finalize(rep, payoff_scale(f, s, jstar));
  run_cross_check(rep, ipath, s, cfg);
  return rep;
}

TanakaReport transformed_residual(const convex::MonotoneMap& g,
                                  const convex::ConvexCombination& f,
                                  const gauss::MixedEnsemble& ens,
                                  const integ::PartitionSequence& seq,
                                  const integ::StopRule* stop,
                                  const LocalTimeConfig& cfg) {
  seq.validate();
  const SampledPath& y = ens.y;
  check_monotone(g, y);
  const SampledPath s = map_values(y, g.forward);
  const auto& fine = seq.levels.back();
  const std::size_t jstar = stop_index(s, stop);

  TanakaReport rep;
  rep.grid_cells = fine.size() - 1;
  rep.lhs = f.value(s.x()[jstar]) - f.value(s.x().front());
  const SampledPath ipath = left_derivative_path(f, s);
  rep.integral = follmer_term(ipath, s, fine, jstar);

  if (has_curvature(f) && jstar >= 2) {
    // pathwise clock: squared increments of the transformed path, frozen at
    // the stop index so the field only measures [0, tau]
    std::vector<double> cv(s.points(), 0.0), active(jstar);
    for (std::size_t i = 0; i < s.cells(); ++i) {
      const double d = s.x()[i + 1] - s.x()[i];
      if (i < jstar) active[i] = d;
      cv[i + 1] = cv[i] + (i < jstar ? d * d : 0.0);
    }
    const double eps = cfg.bandwidth > 0.0 ? cfg.bandwidth
                                           : 2.0 * sample_std(active, jstar);
    require(eps > 0.0, "local-time window degenerated to zero width");
    const auto [lo, hi] =
        std::minmax_element(s.x().begin(), s.x().begin() + jstar + 1);
    const auto levels = level_grid(*lo, *hi, eps, cfg.level_count);
    const auto field =
        ltime::estimate_local_time(s, BracketPath{s.t(), cv}, levels, eps);
    rep.bandwidth = eps;
    rep.lt_term = measure_pairing(f, levels, terminal_slice(field));
    if (field.undersmoothed)
      add_notice(rep, "local-time window is narrower than a one-step move");
  } else if (has_curvature(f)) {
    add_notice(rep, "stopped before the window estimator has increments; "
                    "local-time term dropped");
  }

  finalize(rep, payoff_scale(f, s, jstar));
  run_cross_check(rep, ipath, s, cfg);
  return rep;
}

}  // namespace pathint::tanaka
