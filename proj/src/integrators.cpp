#include "pathint/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pathint/frac_calc.hpp"
#include "pathint/simd/kernels.hpp"

namespace pathint::integ {
namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

double mesh_of(const std::vector<double>& part) {
  double m = 0.0;
  for (std::size_t i = 1; i < part.size(); ++i)
    m = std::max(m, part[i] - part[i - 1]);
  return m;
}

// map partition times onto grid indices, insisting they actually lie on it
std::vector<std::size_t> partition_indices(const std::vector<double>& grid,
                                           const std::vector<double>& part) {
  require(part.size() >= 2 && part.front() == 0.0, "partition must start at 0");
  const double tol = 1e-9 * std::max(1.0, grid.back());
  require(std::fabs(part.back() - grid.back()) <= tol,
          "partition must end at the path horizon");
  std::vector<std::size_t> idx(part.size());
  for (std::size_t j = 0; j < part.size(); ++j) {
    auto it = std::lower_bound(grid.begin(), grid.end(), part[j] - tol);
    require(it != grid.end() && std::fabs(*it - part[j]) <= tol,
            "partition point not on the path grid");
    idx[j] = static_cast<std::size_t>(it - grid.begin());
    require(j == 0 || idx[j] > idx[j - 1], "partition must increase strictly");
  }
  return idx;
}

double forward_sum_at(const SampledPath& f, const SampledPath& g,
                      const std::vector<std::size_t>& idx) {
  const auto& K = kernels::active();
  if (idx.size() == f.points()) {  // partition == grid
    return K.forward_sum(f.x().data(), g.x().data(), f.points());
  }
  std::vector<double> fv(idx.size()), gv(idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j) {
    fv[j] = f.x()[idx[j]];
    gv[j] = g.x()[idx[j]];
  }
  return K.forward_sum(fv.data(), gv.data(), idx.size());
}

}  // namespace

PartitionSequence PartitionSequence::dyadic(double horizon,
                                            std::size_t coarse_log2,
                                            std::size_t fine_log2) {
  require(horizon > 0.0, "partition horizon must be positive");
  require(coarse_log2 <= fine_log2, "coarse level must not exceed fine level");
  PartitionSequence seq;
  seq.nested = true;
  for (std::size_t k = coarse_log2; k <= fine_log2; ++k)
    seq.levels.push_back(uniform_grid(horizon, std::size_t(1) << k));
  return seq;
}

void PartitionSequence::validate() const {
  require(!levels.empty(), "partition sequence is empty");
  double prev_mesh = std::numeric_limits<double>::infinity();
  for (const auto& level : levels) {
    require(level.size() >= 2 && level.front() == 0.0,
            "every partition level must start at 0");
    for (std::size_t i = 1; i < level.size(); ++i)
      require(level[i] > level[i - 1], "partition levels must increase strictly");
    const double m = mesh_of(level);
    require(m < prev_mesh, "partition meshes must decrease strictly");
    prev_mesh = m;
  }
  if (nested) {
    const double tol = 1e-9 * std::max(1.0, levels.front().back());
    for (std::size_t l = 1; l < levels.size(); ++l) {
      std::size_t j = 0;
      for (double t : levels[l - 1]) {
        while (j < levels[l].size() && levels[l][j] < t - tol) ++j;
        require(j < levels[l].size() && std::fabs(levels[l][j] - t) <= tol,
                "nested sequence must refine the previous level");
      }
    }
  }
}

double rs_forward_sum(const SampledPath& f, const SampledPath& g,
                      const std::vector<double>& partition) {
  require(f.same_grid(g), "forward sum needs integrand and integrator on one grid");
  return forward_sum_at(f, g, partition_indices(f.t(), partition));
}

GlsResult gls_integral(const SampledPath& f, const SampledPath& g, double beta) {
  require(f.same_grid(g), "pairing integral needs both paths on one grid");
  require(beta > 0.0 && beta < 1.0, "pairing order must lie in (0,1)");
  const double h = f.uniform_step();
  const std::size_t n = f.cells();
  const auto& K = kernels::active();

  GlsResult res;
  res.beta = beta;
  res.grid_cells = n;

  // center the integrand; the constant part integrates exactly
  const double f0 = f.x()[0];
  std::vector<double> fc(f.points());
  for (std::size_t i = 0; i < fc.size(); ++i) fc[i] = f.x()[i] - f0;
  SampledPath fcen = f.with_values(std::move(fc));

  // integrator shifted to vanish at T, then differentiated from the right
  std::vector<double> gt(g.points());
  const double gT = g.x().back();
  for (std::size_t i = 0; i < gt.size(); ++i) gt[i] = g.x()[i] - gT;
  SampledPath gshift = g.with_values(std::move(gt));

  const auto df = frac::frac_derivative(fcen, {frac::Side::left, beta}).x();
  const auto dg = frac::frac_derivative(gshift, {frac::Side::right, 1.0 - beta}).x();

  // trapezoid over [0, t_{n-1}]; df[0] = 0 and dg[n] = 0 by construction
  double pair_int = 0.0;
  if (n >= 2) {
    pair_int = K.dot(df.data() + 1, dg.data() + 1, n - 2) * h;
    pair_int += 0.5 * h * df[n - 1] * dg[n - 1];
    // cell adjacent to T: the integrator derivative follows a power of the
    // remaining time; measure the local exponent from the last two interior
    // nodes and integrate the power closed-form (reduces to h/2 for flat data)
    double edge = 0.5 * h * df[n - 1] * dg[n - 1];
    if (dg[n - 1] != 0.0 && dg[n - 2] * dg[n - 1] > 0.0) {
      double kappa = std::log2(std::fabs(dg[n - 2] / dg[n - 1]));
      kappa = std::clamp(kappa, -0.9, 3.0);
      edge = df[n - 1] * dg[n - 1] * h / (kappa + 1.0);
    }
    pair_int += edge;
  } else {
    pair_int = df[0] * dg[0] * h;  // single cell: both ends pinned to 0
  }

  res.value = f0 * (g.x().back() - g.x().front()) - pair_int;

  // a-priori estimate: sup of the integrator derivative times the integral
  // norm of the full integrand
  double sup_dg = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    sup_dg = std::max(sup_dg, std::fabs(dg[i]));
  const auto w2 = frac::besov_w2_norm(f, beta);
  res.bound = sup_dg * w2.value;

  // feasibility heuristic: norms of admissible inputs stabilize under
  // coarsening by 2; marked growth suggests the pairing diverges
  if (n % 2 == 0 && n >= 64) {
    auto coarse = [](const SampledPath& p) {
      std::vector<double> t(p.cells() / 2 + 1), x(p.cells() / 2 + 1);
      for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = p.t()[2 * i];
        x[i] = p.x()[2 * i];
      }
      return SampledPath(std::move(t), std::move(x));
    };
    const double grow_f =
        w2.value / std::max(frac::besov_w2_norm(coarse(f), beta).value, 1e-300);
    const double w1g = frac::besov_w1_norm(g, 1.0 - beta).value;
    const double grow_g =
        w1g / std::max(frac::besov_w1_norm(coarse(g), 1.0 - beta).value, 1e-300);
    const double cap = 1.19;  // 2^0.25 per refinement
    if (grow_f > cap || grow_g > cap) {
      res.feasible = false;
      res.warning = grow_f > cap
                        ? "integrand norm grows under refinement (order too large?)"
                        : "integrator norm grows under refinement (order too small?)";
    }
  }
  return res;
}

ConvergenceRecord follmer_limit(const SampledPath& f, const SampledPath& g,
                                const PartitionSequence& seq) {
  require(f.same_grid(g), "forward sums need integrand and integrator on one grid");
  seq.validate();
  ConvergenceRecord rec;
  for (const auto& level : seq.levels) {
    rec.values.push_back(forward_sum_at(f, g, partition_indices(f.t(), level)));
    rec.meshes.push_back(mesh_of(level));
  }
  rec.final_value = rec.values.back();

  // rate from the last four pre-finest levels with usable gaps
  std::vector<double> lx, ly;
  const std::size_t levels = rec.values.size();
  for (std::size_t i = levels >= 5 ? levels - 5 : 0; i + 1 < levels; ++i) {
    const double err = std::fabs(rec.values[i] - rec.final_value);
    if (err > 0.0) {
      lx.push_back(std::log(rec.meshes[i]));
      ly.push_back(std::log(err));
    }
  }
  if (lx.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    const double nd = static_cast<double>(lx.size());
    rec.fitted_rate = (nd * sxy - sx * sy) / (nd * sxx - sx * sx);
  }
  return rec;
}

std::pair<BracketPath, ConvergenceRecord> quadratic_variation(
    const SampledPath& x, const PartitionSequence& seq) {
  seq.validate();
  ConvergenceRecord rec;
  std::vector<std::size_t> finest;
  for (const auto& level : seq.levels) {
    finest = partition_indices(x.t(), level);
    double qv = 0.0;
    for (std::size_t j = 1; j < finest.size(); ++j) {
      const double d = x.x()[finest[j]] - x.x()[finest[j - 1]];
      qv += d * d;
    }
    rec.values.push_back(qv);
    rec.meshes.push_back(mesh_of(level));
  }
  rec.final_value = rec.values.back();

  BracketPath bracket;
  bracket.t.resize(finest.size());
  bracket.v.resize(finest.size());
  double acc = 0.0;
  bracket.t[0] = x.t()[finest[0]];
  bracket.v[0] = 0.0;
  for (std::size_t j = 1; j < finest.size(); ++j) {
    const double d = x.x()[finest[j]] - x.x()[finest[j - 1]];
    acc += d * d;
    bracket.t[j] = x.t()[finest[j]];
    bracket.v[j] = acc;
  }
  bracket.validate();
  return {std::move(bracket), std::move(rec)};
}

StopRule StopRule::at(double t) {
  StopRule r;
  r.kind = Kind::deterministic;
  r.when = t;
  return r;
}

StopRule StopRule::hit(double level, bool from_below) {
  StopRule r;
  r.kind = Kind::first_hit;
  r.level = level;
  r.from_below = from_below;
  return r;
}

double resolve_stop_time(const SampledPath& x, const StopRule& rule) {
  if (rule.kind == StopRule::Kind::deterministic) {
    require(rule.when >= 0.0, "stop time must be nonnegative");
    return std::min(rule.when, x.horizon());
  }
  for (std::size_t i = 0; i < x.points(); ++i) {
    const bool hit =
        rule.from_below ? x.x()[i] >= rule.level : x.x()[i] <= rule.level;
    if (hit) return x.t()[i];
  }
  return x.horizon();
}

SampledPath truncate_at(const SampledPath& f, const StopRule& rule) {
  const double tau = resolve_stop_time(f, rule);
  std::vector<double> y(f.points());
  for (std::size_t i = 0; i < f.points(); ++i)
    y[i] = f.t()[i] <= tau ? f.x()[i] : 0.0;
  return f.with_values(std::move(y));
}

std::pair<double, double> feasible_beta(double alpha, double eta) {
  return {1.0 - eta, std::min(alpha, 3.0 * alpha - 1.0)};
}

double default_gls_beta(double alpha, double eta) {
  const auto [lo, hi] = feasible_beta(alpha, eta);
  if (!(lo < hi))
    throw std::invalid_argument(
        "no admissible pairing order for class " + std::to_string(alpha) +
        " against exponent " + std::to_string(eta));
  return 0.5 * (lo + hi);
}

}  // namespace pathint::integ
