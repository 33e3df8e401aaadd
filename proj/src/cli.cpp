#include "pathint/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "pathint/convex.hpp"
#include "pathint/crossing.hpp"
#include "pathint/frac_calc.hpp"
#include "pathint/gaussian.hpp"
#include "pathint/hedging.hpp"
#include "pathint/integrators.hpp"
#include "pathint/local_time.hpp"
#include "pathint/path.hpp"
#include "pathint/tanaka.hpp"
#include "pathint/version.hpp"

namespace fs = std::filesystem;

namespace pathint::cli {
namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool valid_token(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::islower(static_cast<unsigned char>(c)) ||
          std::isdigit(static_cast<unsigned char>(c)) || c == '_'))
      return false;
  return true;
}

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

std::string at_line(std::size_t line) {
  return line == 0 ? std::string{} : " (line " + std::to_string(line) + ")";
}

}  // namespace

// ---------------------------------------------------------------------------
// config text

Config Config::parse(const std::string& text) {
  Config c;
  std::istringstream in(text);
  std::string raw, section;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        fail("section header must close its bracket" + at_line(line_no));
      section = trim(line.substr(1, line.size() - 2));
      if (!valid_token(section))
        fail("bad section name '" + section + "'" + at_line(line_no));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail("expected `key = value`" + at_line(line_no));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!valid_token(key))
      fail("bad config key '" + key + "'" + at_line(line_no));
    if (section.empty())
      fail("config key '" + key + "' appears before any [section]" +
           at_line(line_no));
    if (value.empty())
      fail("config key '" + section + "." + key + "' has an empty value" +
           at_line(line_no));
    const std::string full = section + "." + key;
    if (c.find(full))
      fail("duplicate config key '" + full + "'" + at_line(line_no));
    c.slots_.push_back(Slot{full, value, line_no, false});
    c.entries_.emplace_back(full, value);
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

Config::Slot* Config::find(const std::string& key) {
  for (auto& s : slots_)
    if (s.key == key) return &s;
  return nullptr;
}

const std::string* Config::consume(const std::string& key) {
  Slot* s = find(key);
  if (!s) return nullptr;
  s->consumed = true;
  return &s->value;
}

bool Config::has(const std::string& key) const {
  return const_cast<Config*>(this)->find(key) != nullptr;
}

std::string Config::require_str(const std::string& key) {
  const std::string* v = consume(key);
  if (!v) fail("missing required config key '" + key + "'");
  return *v;
}

std::string Config::get_str(const std::string& key,
                            const std::string& fallback) {
  const std::string* v = consume(key);
  return v ? *v : fallback;
}

namespace {

double parse_real(const std::string& key, const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + text.size() || !std::isfinite(v))
    fail("config key '" + key + "' expects a number (got '" + text + "')");
  return v;
}

}  // namespace

double Config::require_real(const std::string& key) {
  return parse_real(key, require_str(key));
}

double Config::get_real(const std::string& key, double fallback) {
  const std::string* v = consume(key);
  return v ? parse_real(key, *v) : fallback;
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) {
  const std::string* v = consume(key);
  if (!v) return fallback;
  const char* begin = v->c_str();
  char* end = nullptr;
  const long long n = std::strtoll(begin, &end, 10);
  if (end != begin + v->size())
    fail("config key '" + key + "' expects an integer (got '" + *v + "')");
  return n;
}

bool Config::get_bool(const std::string& key, bool fallback) {
  const std::string* v = consume(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "yes" || *v == "1") return true;
  if (*v == "false" || *v == "no" || *v == "0") return false;
  fail("config key '" + key + "' expects true or false (got '" + *v + "')");
}

std::vector<double> Config::get_reals(const std::string& key,
                                      std::vector<double> fallback) {
  const std::string* v = consume(key);
  if (!v) return fallback;
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= v->size()) {
    const auto comma = v->find(',', start);
    const auto stop = comma == std::string::npos ? v->size() : comma;
    const std::string part = trim(v->substr(start, stop - start));
    if (part.empty())
      fail("config key '" + key + "' has an empty list entry");
    out.push_back(parse_real(key, part));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

void Config::override_value(const std::string& key, const std::string& value) {
  if (Slot* s = find(key)) {
    s->value = value;
    for (auto& e : entries_)
      if (e.first == key) e.second = value;
    return;
  }
  slots_.push_back(Slot{key, value, 0, false});
  entries_.emplace_back(key, value);
}

void Config::reject_unknown() const {
  for (const auto& s : slots_)
    if (!s.consumed)
      fail("unknown or unused config key '" + s.key + "'" + at_line(s.line));
}

std::string Config::canonical() const {
  auto sorted = entries_;
  std::sort(sorted.begin(), sorted.end());
  std::string out;
  for (const auto& [k, v] : sorted) {
    out += k;
    out += '=';
    out += v;
    out += '\n';
  }
  return out;
}

std::uint64_t Config::hash() const {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a 64
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// ---------------------------------------------------------------------------
// artifacts

namespace {

std::string fmt12(double v) {
  if (!std::isfinite(v))
    throw std::runtime_error("non-finite value reached a CSV column");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

void write_atomic(const fs::path& target, const std::string& content) {
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out)
      throw std::runtime_error("cannot write artifact '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

struct RunContext {
  std::string kind;
  std::uint64_t seed = 1;
  std::size_t replicas = 1;
  fs::path out;
};

// ---------------------------------------------------------------------------
// model block shared by every experiment

struct ModelSpec {
  enum class Kind { bm, fbm, stationary, mixed };
  Kind kind = Kind::bm;
  double horizon = 1.0;
  double hurst = 0.5;
  double rate = 1.0;   // stationary kernel r(u) = exp(-rate u)
  double scale = 1.0;  // weight of the mixed model's Hoelder part
};

ModelSpec read_model(Config& cfg, bool allow_mixed) {
  ModelSpec ms;
  const std::string kind = cfg.require_str("model.kind");
  ms.horizon = cfg.get_real("model.horizon", 1.0);
  if (!(ms.horizon > 0.0)) fail("model.horizon must be positive");
  if (kind == "bm") {
    ms.kind = ModelSpec::Kind::bm;
  } else if (kind == "fbm") {
    ms.kind = ModelSpec::Kind::fbm;
    ms.hurst = cfg.require_real("model.hurst");
    if (!(ms.hurst > 0.0 && ms.hurst < 1.0))
      fail("model.hurst must lie in (0, 1)");
  } else if (kind == "stationary") {
    ms.kind = ModelSpec::Kind::stationary;
    ms.rate = cfg.get_real("model.rate", 1.0);
    if (!(ms.rate > 0.0)) fail("model.rate must be positive");
  } else if (kind == "mixed") {
    if (!allow_mixed)
      fail("model.kind = mixed does not define a covariance; this experiment "
           "needs bm, fbm, or stationary");
    ms.kind = ModelSpec::Kind::mixed;
    ms.hurst = cfg.get_real("model.hurst", 0.75);
    if (!(ms.hurst > 0.5 && ms.hurst < 1.0))
      fail("model.hurst must lie in (0.5, 1) for the mixed model");
    ms.scale = cfg.get_real("model.scale", 1.0);
    if (!(ms.scale >= 0.0)) fail("model.scale must be nonnegative");
  } else {
    fail("model.kind must be bm, fbm, stationary, or mixed (got '" + kind +
         "')");
  }
  return ms;
}

gauss::CovarianceModel covariance_of(const ModelSpec& ms) {
  switch (ms.kind) {
    case ModelSpec::Kind::bm:
      return gauss::CovarianceModel::fractional(0.5, ms.horizon, "bm");
    case ModelSpec::Kind::fbm:
      return gauss::CovarianceModel::fractional(ms.hurst, ms.horizon);
    case ModelSpec::Kind::stationary: {
      const double rate = ms.rate;
      return gauss::CovarianceModel::stationary_r(
          [rate](double u) { return std::exp(-rate * u); }, ms.horizon,
          "exp-stationary");
    }
    case ModelSpec::Kind::mixed:
      break;
  }
  throw std::logic_error("covariance_of called on a mixed model");
}

gauss::MixedModel mixed_of(const ModelSpec& ms) {
  gauss::MixedModel m;
  m.bracket = [](double t) { return t; };
  m.hurst = ms.hurst;
  m.hoelder_scale = ms.scale;
  m.horizon = ms.horizon;
  return m;
}

// one driver path per replica; mixed models hand back the summed path
SampledPath sample_one(const ModelSpec& ms, const std::vector<double>& grid,
                       std::uint64_t seed) {
  if (ms.kind == ModelSpec::Kind::mixed)
    return std::move(gauss::sample_mixed(mixed_of(ms), grid, 1, seed)[0].y);
  return std::move(gauss::sample_paths(covariance_of(ms), grid, 1, seed)[0]);
}

// ---------------------------------------------------------------------------
// shared small validators

// the exact samplers switch to dense factorizations past 2^14 cells, which
// this box cannot hold in memory; the runner refuses rather than thrashing
constexpr std::int64_t kMaxCells = 1 << 14;

std::int64_t read_range(Config& cfg, const std::string& key,
                        std::int64_t fallback, std::int64_t lo,
                        std::int64_t hi) {
  const std::int64_t v = cfg.get_int(key, fallback);
  if (v < lo || v > hi)
    fail("config key '" + key + "' must lie in [" + std::to_string(lo) + ", " +
         std::to_string(hi) + "] (got " + std::to_string(v) + ")");
  return v;
}

struct Ladder {
  std::size_t coarse = 0, fine = 0;
};

Ladder read_ladder(Config& cfg, const std::string& section,
                   std::int64_t coarse_fb, std::int64_t fine_fb) {
  Ladder lad;
  lad.fine = static_cast<std::size_t>(
      read_range(cfg, section + ".fine_log2", fine_fb, 1, 14));
  lad.coarse = static_cast<std::size_t>(read_range(
      cfg, section + ".coarse_log2", std::min<std::int64_t>(coarse_fb,
                                                            lad.fine),
      1, static_cast<std::int64_t>(lad.fine)));
  return lad;
}

void require_single_replica(const RunContext& rc) {
  if (rc.replicas != 1)
    fail("run.replicas must be 1 for kind '" + rc.kind + "'");
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) /
                      static_cast<double>(n - 1);
  return out;
}

using Exec = std::function<void()>;

// ---------------------------------------------------------------------------
// simulate: model paths to CSV, one column per replica

Exec plan_simulate(Config& cfg, const RunContext& rc) {
  const ModelSpec ms = read_model(cfg, true);
  const auto cells = static_cast<std::size_t>(
      read_range(cfg, "simulate.cells", 1024, 1, kMaxCells));
  return [ms, cells, rc] {
    const auto grid = uniform_grid(ms.horizon, cells);
    std::vector<SampledPath> paths;
    paths.reserve(rc.replicas);
    if (ms.kind == ModelSpec::Kind::mixed) {
      for (auto& e : gauss::sample_mixed(mixed_of(ms), grid, rc.replicas,
                                         rc.seed))
        paths.push_back(std::move(e.y));
    } else {
      paths = gauss::sample_paths(covariance_of(ms), grid, rc.replicas,
                                  rc.seed);
    }
    std::string csv;
    if (paths.size() == 1) {
      csv = "t,value\n";
      for (std::size_t i = 0; i < grid.size(); ++i)
        csv += fmt12(grid[i]) + "," + fmt12(paths[0].x()[i]) + "\n";
      write_atomic(rc.out / "path.csv", csv);
      return;
    }
    csv = "t";
    for (std::size_t p = 0; p < paths.size(); ++p)
      csv += ",path_" + std::to_string(p);
    csv += '\n';
    for (std::size_t i = 0; i < grid.size(); ++i) {
      csv += fmt12(grid[i]);
      for (const auto& path : paths) csv += "," + fmt12(path.x()[i]);
      csv += '\n';
    }
    write_atomic(rc.out / "paths.csv", csv);
  };
}

// ---------------------------------------------------------------------------
// fracnorm: both regularity norms across grid sizes

Exec plan_fracnorm(Config& cfg, const RunContext& rc) {
  require_single_replica(rc);
  const ModelSpec ms = read_model(cfg, true);
  const auto betas = cfg.get_reals("fracnorm.beta", {0.4});
  for (double b : betas)
    if (!(b > 0.0 && b < 1.0))
      fail("fracnorm.beta entries must lie in (0, 1)");
  std::vector<std::size_t> sizes;
  for (double c : cfg.get_reals("fracnorm.cells", {256.0, 1024.0})) {
    if (c < 2 || c > static_cast<double>(kMaxCells) ||
        c != std::floor(c))
      fail("fracnorm.cells entries must be whole numbers in [2, " +
           std::to_string(kMaxCells) + "]");
    sizes.push_back(static_cast<std::size_t>(c));
  }
  return [ms, betas, sizes, rc] {
    std::string csv = "beta,grid_n,norm_w1,norm_w2\n";
    for (std::size_t cells : sizes) {
      const auto grid = uniform_grid(ms.horizon, cells);
      const SampledPath path = sample_one(ms, grid, rc.seed);
      for (double beta : betas) {
        const auto w1 = frac::besov_w1_norm(path, beta);
        const auto w2 = frac::besov_w2_norm(path, beta);
        csv += fmt12(beta) + "," + std::to_string(cells) + "," +
               fmt12(w1.value) + "," + fmt12(w2.value) + "\n";
      }
    }
    write_atomic(rc.out / "fracnorm.csv", csv);
  };
}

// ---------------------------------------------------------------------------
// integrate: forward-sum ladder for a payoff's left derivative

Exec plan_integrate(Config& cfg, const RunContext& rc) {
  require_single_replica(rc);
  const ModelSpec ms = read_model(cfg, true);
  const auto f = convex::parse_payoff(cfg.get_str("integrate.payoff",
                                                  "call(1)"));
  const Ladder lad = read_ladder(cfg, "integrate", 6, 12);
  return [ms, f, lad, rc] {
    const auto grid =
        uniform_grid(ms.horizon, std::size_t{1} << lad.fine);
    const SampledPath path = sample_one(ms, grid, rc.seed);
    std::vector<double> fp(path.points());
    for (std::size_t i = 0; i < fp.size(); ++i)
      fp[i] = f.left_derivative(path.x()[i]);
    const auto seq =
        integ::PartitionSequence::dyadic(ms.horizon, lad.coarse, lad.fine);
    const auto rec =
        integ::follmer_limit(path.with_values(std::move(fp)), path, seq);
    std::string csv = "level,mesh,value\n";
    for (std::size_t i = 0; i < rec.values.size(); ++i)
      csv += std::to_string(lad.coarse + i) + "," + fmt12(rec.meshes[i]) +
             "," + fmt12(rec.values[i]) + "\n";
    write_atomic(rc.out / "integrate.csv", csv);
  };
}

// ---------------------------------------------------------------------------
// localtime: window-estimator field of one path, long format

Exec plan_localtime(Config& cfg, const RunContext& rc) {
  require_single_replica(rc);
  const ModelSpec ms = read_model(cfg, true);
  const auto cells = static_cast<std::size_t>(
      read_range(cfg, "localtime.cells", 1024, 2, kMaxCells));
  const double eps_cfg = cfg.get_real("localtime.epsilon", 0.0);
  if (eps_cfg < 0.0) fail("localtime.epsilon must be nonnegative");
  const auto level_count = static_cast<std::size_t>(
      read_range(cfg, "localtime.levels", 0, 0, 4096));
  if (level_count == 1) fail("localtime.levels needs at least 2 levels");
  const auto stride = static_cast<std::size_t>(
      read_range(cfg, "localtime.time_stride", 1, 1, kMaxCells));
  std::size_t coarse = 0;
  if (ms.kind != ModelSpec::Kind::mixed) {
    // the clock comes from the path's own quadratic variation ladder, so the
    // grid must be dyadic
    if ((cells & (cells - 1)) != 0)
      fail("localtime.cells must be a power of two when the clock is "
           "estimated from the path");
    std::size_t fine = 0;
    while ((std::size_t{1} << fine) < cells) ++fine;
    coarse = static_cast<std::size_t>(
        read_range(cfg, "localtime.coarse_log2",
                   std::min<std::int64_t>(8, static_cast<std::int64_t>(fine)),
                   1, static_cast<std::int64_t>(fine)));
  }
  return [ms, cells, eps_cfg, level_count, stride, coarse, rc] {
    const auto grid = uniform_grid(ms.horizon, cells);
    SampledPath y(grid, std::vector<double>(grid.size(), 0.0));
    BracketPath clock{grid, {}};
    if (ms.kind == ModelSpec::Kind::mixed) {
      auto ens = gauss::sample_mixed(mixed_of(ms), grid, 1, rc.seed);
      y = std::move(ens[0].y);
      clock = std::move(ens[0].bracket);
    } else {
      y = std::move(
          gauss::sample_paths(covariance_of(ms), grid, 1, rc.seed)[0]);
      std::size_t fine = 0;
      while ((std::size_t{1} << fine) < cells) ++fine;
      clock = integ::quadratic_variation(
                  y, integ::PartitionSequence::dyadic(ms.horizon, coarse,
                                                      fine))
                  .first;
    }
    const double eps = eps_cfg > 0.0 ? eps_cfg : ltime::default_bandwidth(y);
    std::vector<double> levels;
    if (level_count >= 2) {
      const auto [lo, hi] =
          std::minmax_element(y.x().begin(), y.x().end());
      levels = linspace(*lo - 3.0 * eps, *hi + 3.0 * eps, level_count);
    } else {
      levels = ltime::default_levels(y, eps);
    }
    const auto field = ltime::estimate_local_time(y, clock, levels, eps);
    std::string csv = "a,t,L\n";
    for (std::size_t li = 0; li < field.levels.size(); ++li)
      for (std::size_t ti = 0; ti < field.times.size(); ti += stride)
        csv += fmt12(field.levels[li]) + "," + fmt12(field.times[ti]) + "," +
               fmt12(field.at(li, ti)) + "\n";
    write_atomic(rc.out / "localtime.csv", csv);
  };
}

// ---------------------------------------------------------------------------
// tanaka: convex identity residuals over a mixed ensemble

Exec plan_tanaka(Config& cfg, const RunContext& rc) {
  const ModelSpec ms = read_model(cfg, true);
  if (ms.kind != ModelSpec::Kind::mixed)
    fail("tanaka needs model.kind = mixed; the local-time term needs a "
         "quadratic-variation clock");
  const auto f = convex::parse_payoff(cfg.require_str("tanaka.payoff"));
  const Ladder lad = read_ladder(cfg, "tanaka", 9, 12);
  tanaka::LocalTimeConfig lt;
  lt.bandwidth = cfg.get_real("tanaka.bandwidth", 0.0);
  if (lt.bandwidth < 0.0) fail("tanaka.bandwidth must be nonnegative");
  lt.level_count = static_cast<std::size_t>(
      read_range(cfg, "tanaka.levels", 81, 3, 4096));
  lt.gls_cross_check = cfg.get_bool("tanaka.gls_check", false);
  if (lt.gls_cross_check) {
    lt.alpha = cfg.get_real("tanaka.alpha", 0.5);
    lt.eta = cfg.get_real("tanaka.eta", ms.hurst);
    if (!(lt.alpha > 0.0 && lt.alpha < 1.0) ||
        !(lt.eta > 0.0 && lt.eta < 1.0))
      fail("tanaka.alpha and tanaka.eta must lie in (0, 1)");
  }
  return [ms, f, lad, lt, rc] {
    const auto grid =
        uniform_grid(ms.horizon, std::size_t{1} << lad.fine);
    const auto seq =
        integ::PartitionSequence::dyadic(ms.horizon, lad.coarse, lad.fine);
    const auto ens =
        gauss::sample_mixed(mixed_of(ms), grid, rc.replicas, rc.seed);
    std::string csv = "grid_n,lhs,integral,lt_term,residual\n";
    std::vector<double> res, abs_res, lts;
    for (const auto& e : ens) {
      const auto rep = tanaka::tanaka_residual(f, e, seq, lt);
      csv += std::to_string(rep.grid_cells) + "," + fmt12(rep.lhs) + "," +
             fmt12(rep.integral) + "," + fmt12(rep.lt_term) + "," +
             fmt12(rep.residual) + "\n";
      res.push_back(rep.residual);
      abs_res.push_back(std::fabs(rep.residual));
      lts.push_back(rep.lt_term);
    }
    auto median = [](std::vector<double> v) {
      std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
      return v[v.size() / 2];
    };
    double lt_sum = 0.0;
    for (double v : lts) lt_sum += v;
    std::string summary =
        "grid_n,paths,median_residual,median_abs_residual,mean_lt_term\n";
    summary += std::to_string(std::size_t{1} << lad.fine) + "," +
               std::to_string(res.size()) + "," + fmt12(median(res)) + "," +
               fmt12(median(abs_res)) + "," +
               fmt12(lt_sum / static_cast<double>(lts.size())) + "\n";
    write_atomic(rc.out / "tanaka.csv", csv);
    write_atomic(rc.out / "summary.csv", summary);
  };
}

// ---------------------------------------------------------------------------
// crossing: exact probability, MC check, and the calibrated bounds

Exec plan_crossing(Config& cfg, const RunContext& rc) {
  require_single_replica(rc);
  const ModelSpec ms = read_model(cfg, false);
  std::vector<double> fallback_times;
  for (double u : {0.1, 0.25, 0.5, 0.75, 0.9})
    fallback_times.push_back(u * ms.horizon);
  const auto times = cfg.get_reals("crossing.times", fallback_times);
  if (times.size() < 2) fail("crossing.times needs at least two entries");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0 && times[i] <= ms.horizon))
      fail("crossing.times entries must lie in (0, model.horizon]");
    if (i > 0 && !(times[i] > times[i - 1]))
      fail("crossing.times must be strictly increasing");
  }
  const auto levels =
      cfg.get_reals("crossing.levels", {-1.0, -0.5, 0.0, 0.5, 1.0});
  const auto n_mc = static_cast<std::size_t>(
      read_range(cfg, "crossing.mc_samples", 100000, 1000, 100000000));
  const double constant =
      cfg.get_real("crossing.constant", cross::kFourTermConstant);
  if (!(constant > 0.0)) fail("crossing.constant must be positive");
  return [ms, times, levels, n_mc, constant, rc] {
    const auto m = covariance_of(ms);
    std::string csv = "s,t,a,exact,mc,se,bound_total,satisfied\n";
    std::uint64_t row = 0;
    for (std::size_t i = 0; i < times.size(); ++i)
      for (std::size_t j = i + 1; j < times.size(); ++j)
        for (double a : levels) {
          const auto bound =
              cross::crossing_bound(m, times[i], times[j], a, constant);
          const auto mc = cross::mc_crossing_prob(m, times[i], times[j], a,
                                                  n_mc,
                                                  rc.seed + 1000003 * row);
          ++row;
          csv += fmt12(times[i]) + "," + fmt12(times[j]) + "," + fmt12(a) +
                 "," + fmt12(bound.probability) + "," + fmt12(mc.estimate) +
                 "," + fmt12(mc.se) + "," + fmt12(bound.total) + "," +
                 (bound.satisfied ? "true" : "false") + "\n";
        }
    write_atomic(rc.out / "crossing.csv", csv);
  };
}

// ---------------------------------------------------------------------------
// hedge: threshold replication ledger plus cutout scans

Exec plan_hedge(Config& cfg, const RunContext& rc) {
  const ModelSpec ms = read_model(cfg, true);
  if (ms.kind == ModelSpec::Kind::fbm && ms.hurst < 0.5)
    fail("hedge needs model.hurst >= 0.5; rougher drivers have no "
         "finite quadratic variation");
  const double strike = cfg.require_real("hedge.strike");
  if (!(strike > 0.0)) fail("hedge.strike must be positive");
  const double s0 = cfg.get_real("hedge.s0", 1.0);
  if (!(s0 > 0.0)) fail("hedge.s0 must be positive");
  const double mu = cfg.get_real("hedge.mu", 0.0);
  const Ladder lad = read_ladder(cfg, "hedge", 9, 12);
  const auto eps_list = cfg.get_reals("hedge.cutout_eps", {});
  for (double e : eps_list)
    if (!(e > 0.0 && e < strike))
      fail("hedge.cutout_eps entries must lie in (0, hedge.strike)");
  hedge::ReplicationConfig rep_cfg;
  rep_cfg.bandwidth = cfg.get_real("hedge.bandwidth", 0.0);
  if (rep_cfg.bandwidth < 0.0) fail("hedge.bandwidth must be nonnegative");
  return [ms, strike, s0, mu, lad, eps_list, rep_cfg, rc] {
    const auto grid =
        uniform_grid(ms.horizon, std::size_t{1} << lad.fine);
    const auto seq =
        integ::PartitionSequence::dyadic(ms.horizon, lad.coarse, lad.fine);
    std::function<double(double)> drift;
    if (mu != 0.0) drift = [mu](double) { return mu; };

    std::vector<SampledPath> drivers;
    std::vector<BracketPath> clocks;
    if (ms.kind == ModelSpec::Kind::mixed) {
      for (auto& e :
           gauss::sample_mixed(mixed_of(ms), grid, rc.replicas, rc.seed)) {
        drivers.push_back(std::move(e.y));
        clocks.push_back(std::move(e.bracket));
      }
    } else {
      drivers = gauss::sample_paths(covariance_of(ms), grid, rc.replicas,
                                    rc.seed);
      for (const auto& y : drivers) {
        if (ms.kind == ModelSpec::Kind::bm ||
            (ms.kind == ModelSpec::Kind::fbm && ms.hurst == 0.5)) {
          clocks.push_back(BracketPath{grid, grid});
        } else if (ms.kind == ModelSpec::Kind::fbm) {
          clocks.push_back(
              BracketPath{grid, std::vector<double>(grid.size(), 0.0)});
        } else {
          clocks.push_back(integ::quadratic_variation(y, seq).first);
        }
      }
    }

    std::string csv = "path_id,payoff,initial,gains,half_L,residual";
    for (double e : eps_list) csv += ",cutouts_" + fmt_short(e);
    csv += '\n';
    for (std::size_t p = 0; p < drivers.size(); ++p) {
      const auto sp = hedge::price_path(drivers[p], clocks[p], drift, s0);
      const auto rep = hedge::replication_report(sp, strike, seq, rep_cfg);
      csv += std::to_string(p) + "," + fmt12(rep.payoff) + "," +
             fmt12(rep.initial) + "," + fmt12(rep.gains) + "," +
             fmt12(rep.half_local_time) + "," + fmt12(rep.residual);
      for (double e : eps_list)
        csv += "," + fmt12(hedge::cutout_costs(sp, strike, e).total);
      csv += '\n';
    }
    write_atomic(rc.out / "hedge.csv", csv);
  };
}

// ---------------------------------------------------------------------------
// membership: regularity-class diagnostic for one covariance model

Exec plan_membership(Config& cfg, const RunContext& rc) {
  require_single_replica(rc);
  const ModelSpec ms = read_model(cfg, false);
  const double fallback =
      ms.kind == ModelSpec::Kind::fbm ? ms.hurst : 0.5;
  const double alpha = cfg.get_real("membership.alpha", fallback);
  if (!(alpha > 0.0 && alpha < 1.0))
    fail("membership.alpha must lie in (0, 1)");
  return [ms, alpha, rc] {
    const auto rep = gauss::check_class_membership(covariance_of(ms), alpha);
    std::string csv =
        "alpha,verdict,w_exponent,w_fit_rms,c_floor,ratio_sup,"
        "positive_r,w_star_fit,variance_floor,ratio_bound\n";
    auto flag = [](bool b) { return b ? "true" : "false"; };
    csv += fmt12(alpha);
    csv += ",";
    csv += rep.verdict_name();
    csv += "," + fmt12(rep.w_exponent) + "," + fmt12(rep.w_fit_rms) + "," +
           fmt12(rep.c_floor) + "," + fmt12(rep.ratio_sup) + ",";
    csv += flag(rep.positive_R.pass);
    csv += ",";
    csv += flag(rep.w_star_fit.pass);
    csv += ",";
    csv += flag(rep.variance_floor.pass);
    csv += ",";
    csv += flag(rep.ratio_bound.pass);
    csv += "\n";
    write_atomic(rc.out / "membership.csv", csv);
  };
}

// ---------------------------------------------------------------------------

void write_manifest(const Config& cfg, const RunContext& rc) {
  std::string m;
  m += "library_version=";
  m += kVersion;
  m += '\n';
  m += "kind=" + rc.kind + "\n";
  m += "seed=" + std::to_string(rc.seed) + "\n";
  m += "replicas=" + std::to_string(rc.replicas) + "\n";
  m += "out=" + rc.out.string() + "\n";
  char hex[24];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(cfg.hash()));
  m += "config_hash=";
  m += hex;
  m += '\n';
  auto sorted = cfg.entries();
  std::sort(sorted.begin(), sorted.end());
  for (const auto& [k, v] : sorted) m += "config." + k + "=" + v + "\n";
  write_atomic(rc.out / "manifest.txt", m);
}

}  // namespace

int run_experiment(const RunOptions& opt, std::ostream& log) {
  Config cfg;
  try {
    cfg = Config::load(opt.config_path);
    if (opt.seed_given)
      cfg.override_value("run.seed", std::to_string(opt.seed));
    if (!opt.out_dir.empty()) cfg.override_value("run.out", opt.out_dir);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return 2;
  }

  RunContext rc;
  rc.kind = opt.kind;
  Exec exec;
  try {
    const std::int64_t seed = cfg.get_int("run.seed", 1);
    if (seed < 0) fail("run.seed must be nonnegative");
    rc.seed = static_cast<std::uint64_t>(seed);
    rc.replicas = static_cast<std::size_t>(
        read_range(cfg, "run.replicas", 1, 1, 1 << 20));
    rc.out = cfg.require_str("run.out");

    if (opt.kind == "simulate") exec = plan_simulate(cfg, rc);
    else if (opt.kind == "fracnorm") exec = plan_fracnorm(cfg, rc);
    else if (opt.kind == "integrate") exec = plan_integrate(cfg, rc);
    else if (opt.kind == "localtime") exec = plan_localtime(cfg, rc);
    else if (opt.kind == "tanaka") exec = plan_tanaka(cfg, rc);
    else if (opt.kind == "crossing") exec = plan_crossing(cfg, rc);
    else if (opt.kind == "hedge") exec = plan_hedge(cfg, rc);
    else if (opt.kind == "membership") exec = plan_membership(cfg, rc);
    else fail("unknown experiment kind '" + opt.kind + "'");

    cfg.reject_unknown();
    fs::create_directories(rc.out);
  } catch (const std::exception& e) {
    log << "config error: " << e.what() << '\n';
    return 2;
  }

  try {
    exec();
    write_manifest(cfg, rc);
  } catch (const std::exception& e) {
    log << "numerical failure: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

}  // namespace pathint::cli
