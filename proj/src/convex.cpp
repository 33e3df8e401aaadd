#include "pathint/convex.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace pathint::convex {
namespace {

// 4-point Gauss-Legendre on [-1,1]: exact for polynomials of degree <= 7.
// Between kink crossings the mollification integrand is a polynomial of
// degree <= 6 (piecewise-quadratic function value times the quartic bump),
// so splitting at the crossings makes the quadrature exact.
constexpr double kGlNode[2] = {0.3399810435848563, 0.8611363115940526};
constexpr double kGlWeight[2] = {0.6521451548625461, 0.3478548451375462};

double sgn_left(double t) { return t > 0.0 ? 1.0 : -1.0; }

void check_density(const PiecewiseDensity& d) {
  if (d.breakpoints.empty() && d.values.empty()) return;
  if (d.breakpoints.size() != d.values.size() + 1)
    throw std::invalid_argument(
        "curvature density needs exactly one more breakpoint than values");
  for (double b : d.breakpoints)
    if (!std::isfinite(b))
      throw std::invalid_argument("curvature density breakpoints must be finite");
  for (double v : d.values)
    if (!std::isfinite(v))
      throw std::invalid_argument("curvature density values must be finite");
  for (std::size_t k = 0; k + 1 < d.breakpoints.size(); ++k)
    if (!(d.breakpoints[k] < d.breakpoints[k + 1]))
      throw std::invalid_argument(
          "curvature density breakpoints must be strictly increasing");
}

void check_combination(const ConvexCombination& f) {
  if (!std::isfinite(f.slope) || !std::isfinite(f.intercept))
    throw std::invalid_argument("convex combination slope/intercept must be finite");
  for (const auto& a : f.atoms)
    if (!std::isfinite(a.location) || !std::isfinite(a.weight))
      throw std::invalid_argument("curvature atoms must be finite");
  check_density(f.density);
}

// int_p^q |x - a| da, exactly.
double abs_mass(double x, double p, double q) {
  if (x <= p) return (q - p) * (0.5 * (p + q) - x);
  if (x >= q) return (q - p) * (x - 0.5 * (p + q));
  const double l = x - p;
  const double r = q - x;
  return 0.5 * (l * l + r * r);
}

// Locations where the curvature part loses smoothness: atom positions and
// density breakpoints.  The mollification quadrature splits there.
void collect_locations(const ConvexCombination& f, std::vector<double>* out) {
  out->clear();
  for (const auto& a : f.atoms) out->push_back(a.location);
  for (double b : f.density.breakpoints) out->push_back(b);
}

// Exact integral of integrand(u) * j(u) over [-1,0], where integrand is
// piecewise polynomial (degree <= 2) with breaks where x + u/n crosses a
// curvature location.
template <class F>
double bump_quadrature(const ConvexCombination& base, int n, double x,
                       F&& integrand) {
  std::vector<double> cuts;
  cuts.push_back(-1.0);
  cuts.push_back(0.0);
  std::vector<double> locs;
  collect_locations(base, &locs);
  for (double p : locs) {
    const double u = n * (p - x);
    if (u > -1.0 && u < 0.0) cuts.push_back(u);
  }
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = cuts[k];
    const double hi = cuts[k + 1];
    if (!(hi > lo)) continue;
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    double acc = 0.0;
    for (int g = 0; g < 2; ++g) {
      const double ua = mid - half * kGlNode[g];
      const double ub = mid + half * kGlNode[g];
      acc += kGlWeight[g] *
             (integrand(ua) * bump_kernel(ua) + integrand(ub) * bump_kernel(ub));
    }
    total += half * acc;
  }
  return total;
}

ConvexCombination scaled(ConvexCombination f, double w) {
  f.slope *= w;
  f.intercept *= w;
  for (auto& a : f.atoms) a.weight *= w;
  for (auto& v : f.density.values) v *= w;
  return f;
}

// Sort atoms by location, combine coincident ones, drop exact zeros.
void normalize_atoms(std::vector<CurvatureAtom>* atoms) {
  std::sort(atoms->begin(), atoms->end(),
            [](const CurvatureAtom& a, const CurvatureAtom& b) {
              return a.location < b.location;
            });
  std::vector<CurvatureAtom> merged;
  for (const auto& a : *atoms) {
    if (!merged.empty() && merged.back().location == a.location)
      merged.back().weight += a.weight;
    else
      merged.push_back(a);
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const CurvatureAtom& a) { return a.weight == 0.0; }),
               merged.end());
  *atoms = std::move(merged);
}

}  // namespace

double ConvexCombination::curvature_value(double x) const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.weight * std::fabs(x - a.location);
  for (std::size_t k = 0; k < density.values.size(); ++k)
    s += density.values[k] *
         abs_mass(x, density.breakpoints[k], density.breakpoints[k + 1]);
  return s;
}

double ConvexCombination::curvature_left_derivative(double x) const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.weight * sgn_left(x - a.location);
  for (std::size_t k = 0; k < density.values.size(); ++k) {
    const double p = density.breakpoints[k];
    const double q = density.breakpoints[k + 1];
    const double c = std::clamp(x, p, q);
    s += density.values[k] * ((c - p) - (q - c));
  }
  return s;
}

double ConvexCombination::value(double x) const {
  return slope * x + intercept + curvature_value(x);
}

double ConvexCombination::left_derivative(double x) const {
  return slope + curvature_left_derivative(x);
}

bool ConvexCombination::pure_convex() const {
  for (const auto& a : atoms)
    if (a.weight < 0.0) return false;
  for (double v : density.values)
    if (v < 0.0) return false;
  return true;
}

double ConvexCombination::total_variation() const {
  double tv = 0.0;
  for (const auto& a : atoms) tv += std::fabs(a.weight);
  for (std::size_t k = 0; k < density.values.size(); ++k)
    tv += std::fabs(density.values[k]) *
          (density.breakpoints[k + 1] - density.breakpoints[k]);
  return tv;
}

std::pair<double, double> eval_and_left_derivative(const ConvexCombination& f,
                                                   double x) {
  check_combination(f);
  if (!std::isfinite(x))
    throw std::invalid_argument("evaluation point must be finite");
  return {f.value(x), f.left_derivative(x)};
}

// (x-K)^+ = x/2 - K/2 + |x-K|/2, (K-x)^+ = K/2 - x/2 + |x-K|/2.
ConvexCombination call_payoff(double strike) {
  return {0.5, -0.5 * strike, {{strike, 0.5}}, {}};
}

ConvexCombination put_payoff(double strike) {
  return {-0.5, 0.5 * strike, {{strike, 0.5}}, {}};
}

ConvexCombination abs_payoff(double center) {
  return {0.0, 0.0, {{center, 1.0}}, {}};
}

namespace {

// Recursive-descent parser for the payoff grammar.  Kept deliberately
// strict: anything it does not recognize is reported with the offending
// fragment rather than silently skipped.
struct PayoffParser {
  const std::string& text;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) const {
    const std::string rest = text.substr(pos, 16);
    throw std::invalid_argument("payoff parse error: " + what + " at '" + rest +
                                "' in \"" + text + "\"");
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }

  char peek() const { return pos < text.size() ? text[pos] : '\0'; }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos;
  }

  std::string name() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() &&
           std::isalpha(static_cast<unsigned char>(text[pos])))
      ++pos;
    if (pos == start) fail("expected a payoff name");
    return text.substr(start, pos - start);
  }

  double number(bool allow_sign) {
    skip_ws();
    const char c = peek();
    const bool signed_start = (c == '+' || c == '-');
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '.' ||
          (allow_sign && signed_start)))
      fail("expected a number");
    const char* start = text.c_str() + pos;
    char* end = nullptr;
    const double v = std::strtod(start, &end);
    if (end == start) fail("expected a number");
    pos += static_cast<std::size_t>(end - start);
    if (!std::isfinite(v)) fail("number out of range");
    return v;
  }

  // call(K) | put(K) | abs(a)
  ConvexCombination leaf(const std::string& fn) {
    skip_ws();
    expect('(');
    const double arg = number(/*allow_sign=*/true);
    skip_ws();
    expect(')');
    if (fn == "call") return call_payoff(arg);
    if (fn == "put") return put_payoff(arg);
    if (fn == "abs") return abs_payoff(arg);
    if (fn == "lincomb")
      fail("lincomb cannot be nested; terms must be call, put or abs");
    fail("unknown payoff '" + fn + "'");
  }

  // w*call(K) or bare call(K); sign already consumed by the caller.
  ConvexCombination term(double sign) {
    skip_ws();
    if (std::isalpha(static_cast<unsigned char>(peek())))
      return scaled(leaf(name()), sign);
    const double w = number(/*allow_sign=*/false);
    skip_ws();
    expect('*');
    return scaled(leaf(name()), sign * w);
  }

  ConvexCombination lincomb() {
    skip_ws();
    expect('(');
    ConvexCombination sum;
    double sign = 1.0;
    skip_ws();
    if (peek() == '+' || peek() == '-') {
      if (text[pos] == '-') sign = -1.0;
      ++pos;
    }
    for (;;) {
      const ConvexCombination t = term(sign);
      sum.slope += t.slope;
      sum.intercept += t.intercept;
      sum.atoms.insert(sum.atoms.end(), t.atoms.begin(), t.atoms.end());
      skip_ws();
      if (peek() == ')') {
        ++pos;
        break;
      }
      if (peek() == '+')
        sign = 1.0;
      else if (peek() == '-')
        sign = -1.0;
      else
        fail("expected '+', '-' or ')'");
      ++pos;
    }
    return sum;
  }

  ConvexCombination parse() {
    const std::string fn = name();
    ConvexCombination f = (fn == "lincomb") ? lincomb() : leaf(fn);
    skip_ws();
    if (pos != text.size()) fail("unexpected trailing characters");
    normalize_atoms(&f.atoms);
    return f;
  }
};

}  // namespace

ConvexCombination parse_payoff(const std::string& text) {
  PayoffParser parser{text};
  return parser.parse();
}

double bump_kernel(double y) {
  if (y <= -1.0 || y >= 0.0) return 0.0;
  const double s = 1.0 + y;
  return 30.0 * y * y * s * s;
}

// Antiderivative of the zero-extended bump with J(0) = 0; constant outside
// the support, and J(0) - J(-1) = 1 is the unit mass.
double bump_kernel_primitive(double y) {
  if (y <= -1.0) return -1.0;
  if (y >= 0.0) return 0.0;
  return y * y * y * (10.0 + y * (15.0 + 6.0 * y));
}

MollifiedConvex mollify(const ConvexCombination& f, int n) {
  check_combination(f);
  if (n < 1) throw std::invalid_argument("mollification index must be >= 1");
  return {f, n};
}

double MollifiedConvex::value(double x) const {
  const double linear = base.slope * x + base.intercept;
  if (base.atoms.empty() && base.density.empty()) return linear;
  const double scale = 1.0 / n;
  return linear + bump_quadrature(base, n, x, [&](double u) {
           return base.curvature_value(x + u * scale);
         });
}

double MollifiedConvex::derivative(double x) const {
  if (base.atoms.empty() && base.density.empty()) return base.slope;
  const double scale = 1.0 / n;
  return base.slope + bump_quadrature(base, n, x, [&](double u) {
           return base.curvature_left_derivative(x + u * scale);
         });
}

double MollifiedConvex::second_derivative(double x) const {
  double s = 0.0;
  for (const auto& a : base.atoms)
    s += 2.0 * n * a.weight * bump_kernel(n * (a.location - x));
  for (std::size_t k = 0; k < base.density.values.size(); ++k) {
    const double lo = std::max(-1.0, n * (base.density.breakpoints[k] - x));
    const double hi = std::min(0.0, n * (base.density.breakpoints[k + 1] - x));
    if (hi > lo)
      s += 2.0 * base.density.values[k] *
           (bump_kernel_primitive(hi) - bump_kernel_primitive(lo));
  }
  return s;
}

PushforwardReport curvature_pushforward(const ConvexCombination& f,
                                        const MonotoneMap& g) {
  check_combination(f);
  if (!g.forward || !g.inverse)
    throw std::invalid_argument("monotone map needs forward and inverse callables");

  std::vector<double> locs;
  collect_locations(f, &locs);

  // Map every curvature location and verify the inverse round trip there.
  auto map_one = [&](double a) {
    const double xi = g.inverse(a);
    if (!std::isfinite(xi))
      throw std::invalid_argument("monotone map inverse is not finite at a level");
    const double back = g.forward(xi);
    if (!(std::fabs(back - a) <= 1e-8 * (1.0 + std::fabs(a))))
      throw std::invalid_argument(
          "monotone map inverse is inconsistent with forward at a level");
    return xi;
  };

  std::vector<double> mapped;
  mapped.reserve(locs.size());
  for (double a : locs) mapped.push_back(map_one(a));

  // Probe strict monotonicity of forward across the hull of the mapped
  // levels (the range the indicator logic will actually use).
  bool increasing = true;
  if (!mapped.empty()) {
    double lo = *std::min_element(mapped.begin(), mapped.end());
    double hi = *std::max_element(mapped.begin(), mapped.end());
    if (hi == lo) {
      const double h = 1e-4 * (1.0 + std::fabs(lo));
      lo -= h;
      hi += h;
    }
    const int cells = 128;
    double prev = g.forward(lo);
    double direction = 0.0;
    for (int k = 1; k <= cells; ++k) {
      const double xk = lo + (hi - lo) * static_cast<double>(k) / cells;
      const double fk = g.forward(xk);
      if (!std::isfinite(fk))
        throw std::invalid_argument("monotone map forward is not finite on the probed range");
      const double step = fk - prev;
      if (step == 0.0 || (direction != 0.0 && step * direction < 0.0))
        throw std::invalid_argument(
            "change of variable is not strictly monotone on the probed range");
      if (direction == 0.0) direction = step;
      prev = fk;
    }
    increasing = direction > 0.0;
  }

  PushforwardReport report;
  report.increasing = increasing;
  for (std::size_t i = 0; i < f.atoms.size(); ++i)
    report.atoms.push_back({mapped[i], f.atoms[i].weight});
  for (std::size_t i = 0; i < f.density.breakpoints.size(); ++i)
    report.density_breakpoints.push_back(mapped[f.atoms.size() + i]);
  std::sort(report.atoms.begin(), report.atoms.end(),
            [](const CurvatureAtom& a, const CurvatureAtom& b) {
              return a.location < b.location;
            });
  std::sort(report.density_breakpoints.begin(), report.density_breakpoints.end());
  return report;
}

}  // namespace pathint::convex
