#include "pathint/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "pathint/rng.hpp"
#include "pathint/simd/kernels.hpp"

namespace pathint::gauss {
namespace {

constexpr std::size_t kMaxRecursionCells = std::size_t(1) << 14;
constexpr std::size_t kMaxDenseCells = std::size_t(1) << 12;

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

std::vector<double> logspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  const double ratio = hi / lo;
  for (std::size_t i = 0; i < n; ++i)
    v[i] = lo * std::pow(ratio, static_cast<double>(i) / static_cast<double>(n - 1));
  return v;
}

struct LineFit {
  double slope = 0.0, intercept = 0.0, rms = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double nd = static_cast<double>(n);
  LineFit f;
  f.slope = (nd * sxy - sx * sy) / (nd * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / nd;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    ss += e * e;
  }
  f.rms = std::sqrt(ss / nd);
  return f;
}

bool grid_is_uniform(const std::vector<double>& t) {
  const double T = t.back();
  const double h = T / static_cast<double>(t.size() - 1);
  for (std::size_t i = 0; i < t.size(); ++i)
    if (std::fabs(t[i] - h * static_cast<double>(i)) > 1e-9 * T) return false;
  return true;
}

void validate_grid(const std::vector<double>& grid, double horizon,
                   const std::string& who) {
  require(grid.size() >= 2, who + ": grid needs at least two points");
  require(grid.front() == 0.0, who + ": grid must start at 0");
  for (std::size_t i = 1; i < grid.size(); ++i)
    require(grid[i] > grid[i - 1], who + ": grid must increase strictly");
  require(grid.back() <= horizon * (1.0 + 1e-12),
          who + ": grid exceeds the model horizon");
}

void validate_model(const CovarianceModel& m) {
  require(m.horizon > 0.0, m.name() + ": horizon must be positive");
  switch (m.kind) {
    case CovarianceModel::Kind::fbm:
      require(m.hurst > 0.0 && m.hurst < 1.0, m.name() + ": hurst must lie in (0,1)");
      break;
    case CovarianceModel::Kind::stationary:
      require(static_cast<bool>(m.r), m.name() + ": stationary model needs r");
      require(m.r(0.0) > 0.0, m.name() + ": r(0) must be positive");
      break;
    case CovarianceModel::Kind::martingale:
      require(static_cast<bool>(m.bracket), m.name() + ": martingale model needs a bracket");
      break;
  }
}

// ---------------------------------------------------------------- sampling

void fill_standard_normals(std::uint64_t seed, std::size_t path, double* z,
                           std::size_t n) {
  auto eng = substream(seed, path);
  std::normal_distribution<double> nd;
  for (std::size_t i = 0; i < n; ++i) z[i] = nd(eng);
}

// Transform rows of standard normals, in place, into draws of a stationary
// Gaussian sequence with autocovariance gamma[0..n-1].  Levinson recursion on
// the prediction coefficients; each step turns z[m] into the conditional
// draw given positions 0..m-1.  The coefficient vector is shared by all
// rows, so the per-step cost is one short dot product per path.
void conditional_transform(const std::vector<double>& gamma,
                           std::vector<std::vector<double>>& rows,
                           const std::string& who) {
  const std::size_t n = gamma.size();
  if (n == 0 || rows.empty()) return;
  require(gamma[0] > 0.0, who + ": degenerate variance");
  const double sd0 = std::sqrt(gamma[0]);

  double dep = 0.0;
  for (std::size_t k = 1; k < n; ++k) dep = std::max(dep, std::fabs(gamma[k]));
  if (dep < 1e-15 * gamma[0]) {  // independent draws (Brownian-type)
    for (auto& row : rows)
      for (double& v : row) v *= sd0;
    return;
  }

  const auto& K = kernels::active();
  std::vector<double> phi(n, 0.0), next(n, 0.0);
  double v = gamma[0];
  for (auto& row : rows) row[0] *= sd0;

  for (std::size_t m = 1; m < n; ++m) {
    const double num = gamma[m] - K.dot(phi.data(), gamma.data() + 1, m - 1);
    const double kap = num / v;
    v *= (1.0 - kap * kap);
    if (!(v > 0.0) || !std::isfinite(kap))
      throw std::runtime_error(who + ": covariance factorization failed on " +
                               std::to_string(n) + " nodes (lag " +
                               std::to_string(m) + ")");
    next[0] = kap;
    for (std::size_t p = 1; p < m; ++p)
      next[p] = phi[p - 1] - kap * phi[m - 1 - p];
    std::swap(phi, next);

    const double sd = std::sqrt(v);
    for (auto& row : rows)
      row[m] = K.dot(phi.data(), row.data(), m) + sd * row[m];
  }
}

std::vector<double> fgn_autocov(std::size_t n, double h, double hurst) {
  const double two_h = 2.0 * hurst;
  std::vector<double> g(n);
  const double scale = std::pow(h, two_h);
  g[0] = scale;
  for (std::size_t k = 1; k < n; ++k) {
    const double kd = static_cast<double>(k);
    g[k] = 0.5 * scale *
           (std::pow(kd + 1.0, two_h) - 2.0 * std::pow(kd, two_h) +
            std::pow(kd - 1.0, two_h));
  }
  return g;
}

bool try_cholesky(std::vector<double>& a, std::size_t n) {
  const auto& K = kernels::active();
  for (std::size_t j = 0; j < n; ++j) {
    const double d = a[j * n + j] - K.dot(&a[j * n], &a[j * n], j);
    if (!(d > 0.0)) return false;
    const double l = std::sqrt(d);
    a[j * n + j] = l;
    for (std::size_t i = j + 1; i < n; ++i)
      a[i * n + j] = (a[i * n + j] - K.dot(&a[i * n], &a[j * n], j)) / l;
  }
  return true;
}

// lower Cholesky factor with a bounded multiplicative jitter ladder
std::vector<double> cholesky_jitter(const std::vector<double>& c, std::size_t n,
                                    const std::string& who) {
  static const double ladder[] = {0.0, 1e-12, 1e-11, 1e-10, 1e-9, 1e-8};
  for (double eps : ladder) {
    std::vector<double> a = c;
    if (eps > 0.0)
      for (std::size_t i = 0; i < n; ++i) a[i * n + i] *= (1.0 + eps);
    if (try_cholesky(a, n)) return a;
  }
  throw std::runtime_error(who + ": covariance factorization failed on " +
                           std::to_string(n) + " nodes after maximum jitter");
}

std::vector<SampledPath> sample_martingale(const CovarianceModel& m,
                                           const std::vector<double>& grid,
                                           std::size_t n_paths,
                                           std::uint64_t seed) {
  const std::size_t cells = grid.size() - 1;
  std::vector<double> inc_var(cells);
  const double b0 = m.bracket(grid[0]);
  double prev = b0;
  for (std::size_t i = 0; i < cells; ++i) {
    const double cur = m.bracket(grid[i + 1]);
    const double w = cur - prev;
    require(w >= -1e-12 * std::max(1.0, std::fabs(cur)),
            m.name() + ": bracket must be nondecreasing");
    inc_var[i] = std::max(w, 0.0);
    prev = cur;
  }

  std::vector<SampledPath> out;
  out.reserve(n_paths);
  std::vector<double> z(cells);
  for (std::size_t p = 0; p < n_paths; ++p) {
    fill_standard_normals(seed, p, z.data(), cells);
    std::vector<double> x(cells + 1, 0.0);
    for (std::size_t i = 0; i < cells; ++i)
      x[i + 1] = x[i] + std::sqrt(inc_var[i]) * z[i];
    out.emplace_back(grid, std::move(x), seed, m.name());
  }
  return out;
}

}  // namespace

// ------------------------------------------------------------------ model

CovarianceModel CovarianceModel::fractional(double hurst, double horizon,
                                            std::string label) {
  CovarianceModel m;
  m.kind = Kind::fbm;
  m.hurst = hurst;
  m.horizon = horizon;
  m.label = std::move(label);
  validate_model(m);
  return m;
}

CovarianceModel CovarianceModel::stationary_r(std::function<double(double)> r,
                                              double horizon, std::string label) {
  CovarianceModel m;
  m.kind = Kind::stationary;
  m.r = std::move(r);
  m.horizon = horizon;
  m.label = std::move(label);
  validate_model(m);
  return m;
}

CovarianceModel CovarianceModel::gaussian_martingale(
    std::function<double(double)> bracket, double horizon, std::string label) {
  CovarianceModel m;
  m.kind = Kind::martingale;
  m.bracket = std::move(bracket);
  m.horizon = horizon;
  m.label = std::move(label);
  validate_model(m);
  return m;
}

const std::string& CovarianceModel::name() const {
  if (!label.empty()) return label;
  static const std::string names[] = {"fbm", "stationary", "martingale"};
  return names[static_cast<int>(kind)];
}

const std::string& MixedModel::name() const {
  if (!label.empty()) return label;
  static const std::string fallback = "mixed";
  return fallback;
}

// ----------------------------------------------------------------- kernel

KernelValues eval_kernel(const CovarianceModel& m, double s, double t) {
  validate_model(m);
  require(s >= 0.0 && t >= 0.0 && s <= m.horizon * (1.0 + 1e-12) &&
              t <= m.horizon * (1.0 + 1e-12),
          m.name() + ": kernel arguments outside [0, horizon]");
  KernelValues kv;
  switch (m.kind) {
    case CovarianceModel::Kind::fbm: {
      const double two_h = 2.0 * m.hurst;
      kv.Vs = std::pow(s, two_h);
      kv.Vt = std::pow(t, two_h);
      kv.W = std::pow(std::fabs(t - s), two_h);
      kv.R = 0.5 * (kv.Vt + kv.Vs - kv.W);
      break;
    }
    case CovarianceModel::Kind::stationary: {
      const double r0 = m.r(0.0);
      kv.R = m.r(std::fabs(t - s));
      kv.Vs = kv.Vt = r0;
      kv.W = 2.0 * (r0 - kv.R);
      break;
    }
    case CovarianceModel::Kind::martingale: {
      const double b0 = m.bracket(0.0);
      kv.Vs = m.bracket(s) - b0;
      kv.Vt = m.bracket(t) - b0;
      require(kv.Vs >= 0.0 && kv.Vt >= 0.0,
              m.name() + ": bracket must be nondecreasing");
      kv.R = std::min(kv.Vs, kv.Vt);
      kv.W = std::fabs(kv.Vt - kv.Vs);
      break;
    }
  }
  return kv;
}

double variance(const CovarianceModel& m, double t) {
  return eval_kernel(m, t, t).Vt;
}

double worst_case_increment(const CovarianceModel& m, double t,
                            std::size_t resolution) {
  validate_model(m);
  require(t >= 0.0 && t <= m.horizon * (1.0 + 1e-12),
          m.name() + ": gap outside [0, horizon]");
  if (t == 0.0) return 0.0;
  switch (m.kind) {
    case CovarianceModel::Kind::fbm:
      return std::pow(t, 2.0 * m.hurst);
    case CovarianceModel::Kind::stationary:
      return 2.0 * (m.r(0.0) - m.r(t));
    case CovarianceModel::Kind::martingale: {
      require(resolution >= 1, m.name() + ": resolution must be positive");
      const double span = m.horizon - t;
      double best = 0.0;
      for (std::size_t j = 0; j <= resolution; ++j) {
        const double s =
            span * static_cast<double>(j) / static_cast<double>(resolution);
        best = std::max(best, m.bracket(s + t) - m.bracket(s));
      }
      return best;
    }
  }
  return 0.0;
}

// ------------------------------------------------------------- membership

const char* MembershipReport::verdict_name() const {
  switch (verdict) {
    case Verdict::member: return "member";
    case Verdict::non_member: return "non-member";
    default: return "inconclusive";
  }
}

MembershipReport check_class_membership(const CovarianceModel& m, double alpha,
                                        const MembershipConfig& cfg) {
  validate_model(m);
  require(alpha > 0.0 && alpha < 1.0, m.name() + ": alpha must lie in (0,1)");
  const double T = m.horizon;
  MembershipReport rep;
  rep.alpha = alpha;
  rep.delta = cfg.delta_fraction * T;

  // (i) strictly positive covariance over a log-spaced scan of (0,T]^2
  {
    auto g = logspace(T * 1e-4, T, cfg.positivity_grid);
    double worst = std::numeric_limits<double>::infinity();
    double ws = 0, wt = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = i; j < g.size(); ++j) {
        const double rv = eval_kernel(m, g[i], g[j]).R;
        if (rv < worst) {
          worst = rv;
          ws = g[i];
          wt = g[j];
        }
      }
    rep.positive_R.pass = worst > 0.0;
    rep.positive_R.statistic = worst;
    rep.positive_R.detail = "min R = " + std::to_string(worst) + " at (s=" +
                            std::to_string(ws) + ", t=" + std::to_string(wt) + ")";
  }

  // (ii) w*(t) ~ C t^{2 alpha} near 0, checked by a log-log fit
  bool fit_unstable = false;
  {
    auto ts = logspace(T * 1e-4, T * 1e-1, cfg.fit_points);
    std::vector<double> lx, ly;
    bool degenerate = false;
    for (double t : ts) {
      const double w = worst_case_increment(m, t, cfg.sup_resolution);
      if (!(w > 0.0)) {
        degenerate = true;
        break;
      }
      lx.push_back(std::log(t));
      ly.push_back(std::log(w));
    }
    if (degenerate) {
      rep.w_star_fit.pass = false;
      rep.w_star_fit.detail = "w* vanishes on the fit window";
    } else {
      const auto f = fit_line(lx, ly);
      rep.w_exponent = f.slope;
      rep.w_fit_rms = f.rms;
      fit_unstable = f.rms > cfg.fit_rms_max;
      rep.w_star_fit.pass =
          !fit_unstable && std::fabs(f.slope - 2.0 * alpha) <= cfg.exponent_tol;
      rep.w_star_fit.statistic = f.slope;
      rep.w_star_fit.detail =
          "fitted exponent " + std::to_string(f.slope) + " vs target " +
          std::to_string(2.0 * alpha) + ", fit rms " + std::to_string(f.rms);
      if (fit_unstable) rep.w_star_fit.detail += " (unstable fit)";
    }
  }

  // (iii) V(s) >= c s^2 for s <= delta: the small-s exponent of V must not
  // exceed 2, and the grid floor of V/s^2 gives the constant
  {
    auto ss = logspace(T * 1e-4, rep.delta, std::max<std::size_t>(cfg.fit_points, 16));
    std::vector<double> lx, ly;
    double c = std::numeric_limits<double>::infinity();
    bool degenerate = false;
    for (double s : ss) {
      const double v = variance(m, s);
      if (!(v > 0.0)) {
        degenerate = true;
        break;
      }
      lx.push_back(std::log(s));
      ly.push_back(std::log(v));
      c = std::min(c, v / (s * s));
    }
    if (degenerate) {
      rep.variance_floor.pass = false;
      rep.variance_floor.detail = "variance vanishes below delta";
    } else {
      const auto f = fit_line(lx, ly);
      rep.c_floor = c;
      rep.variance_floor.pass = f.slope <= 2.0 + cfg.variance_exp_slack;
      rep.variance_floor.statistic = c;
      rep.variance_floor.detail =
          "V exponent " + std::to_string(f.slope) + ", c = " + std::to_string(c) +
          " on (0, " + std::to_string(rep.delta) + "]";
    }
  }

  // (iv) sup R(s,s)/R(t,s) over t in (0, 2 delta), s in [t/2, t]
  {
    auto ts = logspace(2.0 * rep.delta * 1e-4, 2.0 * rep.delta * (1.0 - 1e-9),
                       cfg.ratio_grid);
    double sup = 0.0;
    bool unbounded = false;
    for (double t : ts) {
      for (std::size_t j = 0; j < cfg.ratio_grid; ++j) {
        const double s =
            0.5 * t +
            0.5 * t * static_cast<double>(j) / static_cast<double>(cfg.ratio_grid - 1);
        const auto kv = eval_kernel(m, s, t);
        const double vs = variance(m, s);
        if (!(kv.R > 0.0)) {
          unbounded = true;
          break;
        }
        sup = std::max(sup, vs / kv.R);
      }
      if (unbounded) break;
    }
    rep.ratio_sup = unbounded ? std::numeric_limits<double>::infinity() : sup;
    rep.ratio_bound.pass = !unbounded && sup <= cfg.ratio_cap;
    rep.ratio_bound.statistic = rep.ratio_sup;
    rep.ratio_bound.detail = "sup R(s,s)/R(t,s) = " + std::to_string(rep.ratio_sup);
  }

  const bool hard_fail = !rep.positive_R.pass || !rep.variance_floor.pass ||
                         !rep.ratio_bound.pass ||
                         (!rep.w_star_fit.pass && !fit_unstable);
  if (hard_fail)
    rep.verdict = MembershipReport::Verdict::non_member;
  else if (fit_unstable)
    rep.verdict = MembershipReport::Verdict::inconclusive;
  else
    rep.verdict = MembershipReport::Verdict::member;
  return rep;
}

// --------------------------------------------------------------- sampling

std::vector<SampledPath> sample_paths(const CovarianceModel& m,
                                      const std::vector<double>& grid,
                                      std::size_t n_paths, std::uint64_t seed) {
  validate_model(m);
  validate_grid(grid, m.horizon, m.name());
  require(n_paths >= 1, m.name() + ": need at least one path");
  const std::size_t cells = grid.size() - 1;

  if (m.kind == CovarianceModel::Kind::martingale) {
    require(cells <= kMaxRecursionCells,
            m.name() + ": grid exceeds " + std::to_string(kMaxRecursionCells) +
                " cells");
    return sample_martingale(m, grid, n_paths, seed);
  }

  std::vector<SampledPath> out;
  out.reserve(n_paths);

  if (grid_is_uniform(grid)) {
    require(cells <= kMaxRecursionCells,
            m.name() + ": grid exceeds " + std::to_string(kMaxRecursionCells) +
                " cells");
    const double h = grid.back() / static_cast<double>(cells);
    const bool is_fbm = m.kind == CovarianceModel::Kind::fbm;
    // fbm is sampled through its stationary increments; a stationary model
    // is sampled directly at the nodes
    const std::size_t len = is_fbm ? cells : cells + 1;
    std::vector<double> gamma(len);
    if (is_fbm) {
      gamma = fgn_autocov(len, h, m.hurst);
    } else {
      for (std::size_t k = 0; k < len; ++k) gamma[k] = m.r(static_cast<double>(k) * h);
    }

    std::vector<std::vector<double>> rows(n_paths, std::vector<double>(len));
    for (std::size_t p = 0; p < n_paths; ++p)
      fill_standard_normals(seed, p, rows[p].data(), len);
    conditional_transform(gamma, rows, m.name());

    for (std::size_t p = 0; p < n_paths; ++p) {
      std::vector<double> x(cells + 1);
      if (is_fbm) {
        x[0] = 0.0;
        for (std::size_t i = 0; i < cells; ++i) x[i + 1] = x[i] + rows[p][i];
      } else {
        x = rows[p];
      }
      out.emplace_back(grid, std::move(x), seed, m.name());
    }
    return out;
  }

  // dense route for non-uniform grids
  require(cells <= kMaxDenseCells,
          m.name() + ": non-uniform grid exceeds " +
              std::to_string(kMaxDenseCells) + " cells");
  const bool skip_origin = m.kind == CovarianceModel::Kind::fbm;  // V(0)=0
  const std::size_t n = skip_origin ? cells : cells + 1;
  std::vector<double> c(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ti = grid[i + (skip_origin ? 1 : 0)];
    for (std::size_t j = 0; j <= i; ++j) {
      const double tj = grid[j + (skip_origin ? 1 : 0)];
      const double rv = eval_kernel(m, tj, ti).R;
      c[i * n + j] = rv;
      c[j * n + i] = rv;
    }
  }
  const auto L = cholesky_jitter(c, n, m.name());
  const auto& K = kernels::active();
  std::vector<double> z(n);
  for (std::size_t p = 0; p < n_paths; ++p) {
    fill_standard_normals(seed, p, z.data(), n);
    std::vector<double> x(cells + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      x[i + (skip_origin ? 1 : 0)] = K.dot(&L[i * n], z.data(), i + 1);
    out.emplace_back(grid, std::move(x), seed, m.name());
  }
  return out;
}

std::vector<MixedEnsemble> sample_mixed(const MixedModel& spec,
                                        const std::vector<double>& grid,
                                        std::size_t n_paths,
                                        std::uint64_t seed) {
  require(static_cast<bool>(spec.bracket), spec.name() + ": bracket required");
  require(spec.horizon > 0.0, spec.name() + ": horizon must be positive");
  validate_grid(grid, spec.horizon, spec.name());
  require(n_paths >= 1, spec.name() + ": need at least one path");
  const bool with_x = spec.hoelder_scale != 0.0;
  if (with_x)
    require(spec.hurst > 0.5 && spec.hurst < 1.0,
            spec.name() + ": smooth part needs class index in (1/2, 1)");
  if (spec.coupled)
    require(std::fabs(spec.rho) <= 0.5,
            spec.name() + ": coupling rho must lie in [-1/2, 1/2]");
  const std::size_t cells = grid.size() - 1;
  require(cells <= kMaxRecursionCells,
          spec.name() + ": grid exceeds " + std::to_string(kMaxRecursionCells) +
              " cells");
  if (with_x)
    require(grid_is_uniform(grid),
            spec.name() + ": the smooth part needs a uniform grid");

  // bracket increments; the bracket must carry actual variance
  std::vector<double> db(cells), bv(cells + 1, 0.0);
  const double b0 = spec.bracket(grid[0]);
  double prev = b0;
  for (std::size_t i = 0; i < cells; ++i) {
    const double cur = spec.bracket(grid[i + 1]);
    require(cur >= prev - 1e-12 * std::max(1.0, std::fabs(cur)),
            spec.name() + ": bracket must be nondecreasing");
    db[i] = std::max(cur - prev, 0.0);
    bv[i + 1] = cur - b0;
    prev = cur;
  }
  require(bv.back() > 0.0, spec.name() + ": degenerate bracket (no martingale part)");

  // one engine per path; draw order per cell is (martingale innovation,
  // fresh smooth innovation) so coupling does not change stream layout
  std::vector<std::vector<double>> zm(n_paths, std::vector<double>(cells));
  std::vector<std::vector<double>> zx(n_paths, std::vector<double>(cells));
  for (std::size_t p = 0; p < n_paths; ++p) {
    auto eng = substream(seed, p);
    std::normal_distribution<double> nd;
    for (std::size_t i = 0; i < cells; ++i) {
      zm[p][i] = nd(eng);
      zx[p][i] = nd(eng);
    }
  }
  if (with_x && spec.coupled) {
    const double mix = std::sqrt(1.0 - spec.rho * spec.rho);
    for (std::size_t p = 0; p < n_paths; ++p)
      for (std::size_t i = 0; i < cells; ++i)
        zx[p][i] = spec.rho * zm[p][i] + mix * zx[p][i];
  }

  if (with_x) {
    const double h = grid.back() / static_cast<double>(cells);
    conditional_transform(fgn_autocov(cells, h, spec.hurst), zx, spec.name());
  }

  std::vector<MixedEnsemble> out;
  out.reserve(n_paths);
  for (std::size_t p = 0; p < n_paths; ++p) {
    std::vector<double> mv(cells + 1, 0.0), xv(cells + 1, 0.0), yv(cells + 1, 0.0);
    for (std::size_t i = 0; i < cells; ++i) {
      mv[i + 1] = mv[i] + std::sqrt(db[i]) * zm[p][i];
      xv[i + 1] = with_x ? xv[i] + spec.hoelder_scale * zx[p][i] : 0.0;
    }
    for (std::size_t i = 0; i <= cells; ++i) yv[i] = mv[i] + xv[i];
    MixedEnsemble e{SampledPath(grid, std::move(yv), seed, spec.name()),
                    SampledPath(grid, std::move(mv), seed, spec.name() + ":m"),
                    SampledPath(grid, std::move(xv), seed, spec.name() + ":x"),
                    BracketPath{grid, bv}};
    e.bracket.validate();
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace pathint::gauss
