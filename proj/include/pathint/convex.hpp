#pragma once
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

// Linear combinations of convex functions represented through their
// curvature: f(x) = slope*x + intercept + sum_i w_i |x - a_i|
//                   + int |x - a| rho(a) da,
// with finitely many atoms (a_i, w_i) and a piecewise-constant density rho
// of compact support.  Signed weights are allowed so differences of convex
// functions fit the same container; the distributional second derivative is
// twice the stored measure.
//
// The left derivative uses sgn(0) = -1 throughout, which makes f'_- left
// continuous: the left derivative of (x-K)^+ is the indicator 1_{x>K}.

namespace pathint::convex {

struct CurvatureAtom {
  double location = 0.0;
  double weight = 0.0;
};

// Piecewise-constant density: values[k] on [breakpoints[k], breakpoints[k+1]),
// zero outside.  Empty vectors mean no density part.
struct PiecewiseDensity {
  std::vector<double> breakpoints;  // strictly increasing, one more than values
  std::vector<double> values;
  bool empty() const { return values.empty(); }
};

struct ConvexCombination {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<CurvatureAtom> atoms;
  PiecewiseDensity density;

  double value(double x) const;
  double left_derivative(double x) const;  // sgn(0) = -1 at atom locations
  // value and left derivative with the linear part removed (the part the
  // mollifier acts on).
  double curvature_value(double x) const;
  double curvature_left_derivative(double x) const;
  bool pure_convex() const;       // all atom weights and density values >= 0
  double total_variation() const; // sum |w_i| + int |rho|
};

std::pair<double, double> eval_and_left_derivative(const ConvexCombination& f,
                                                   double x);

// (x-K)^+, (K-x)^+ and |x-a| in curvature form (call/put carry atom weight
// 1/2 plus a linear part; abs is a unit atom).
ConvexCombination call_payoff(double strike);
ConvexCombination put_payoff(double strike);
ConvexCombination abs_payoff(double center);

// Payoff grammar used by config files and the command line:
//   call(K) | put(K) | abs(a) | lincomb(w1*call(K1) + w2*put(K2) - ...)
// Weights are optional (default 1), signs may replace '+', and lincomb terms
// must themselves be call/put/abs.  Malformed input throws invalid_argument
// naming the offending fragment.
ConvexCombination parse_payoff(const std::string& text);

// Smoothing kernel j(y) = 30 y^2 (1+y)^2 on [-1,0] (zero outside): a C^1
// bump with unit mass supported on the left of the origin, so mollification
// only looks backward and mollified derivatives stay below the left
// derivative.  bump_kernel_primitive is the antiderivative with J(0) = 0.
double bump_kernel(double y);
double bump_kernel_primitive(double y);

// n-th mollification f_n(x) = int_{-1}^{0} f(x + u/n) j(u) du of the
// curvature part; the linear part is smooth already and passes through
// unchanged, so linear inputs are reproduced exactly.  Members are C^2:
// value/derivative integrate the piecewise-polynomial integrand exactly
// (Gauss-Legendre between kink crossings) and second_derivative has the
// closed form 2n sum_i w_i j(n(a_i-x)) + 2 int rho(x+u/n) j(u) du.
struct MollifiedConvex {
  ConvexCombination base;
  int n = 1;

  double value(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;
};

MollifiedConvex mollify(const ConvexCombination& f, int n);  // n >= 1

// Strictly monotone change of variable with an explicit inverse, used to
// carry payoff levels between a price path and its driving process.
struct MonotoneMap {
  std::function<double(double)> forward;
  std::function<double(double)> inverse;
};

struct PushforwardReport {
  std::vector<CurvatureAtom> atoms;        // locations mapped through inverse
  std::vector<double> density_breakpoints; // likewise
  bool increasing = true;
};

// Maps every curvature location a to inverse(a) after verifying that forward
// is strictly monotone across the probed range and consistent with inverse;
// violations throw invalid_argument.  Weights are kept as-is: downstream
// consumers only need the levels for indicator logic.
PushforwardReport curvature_pushforward(const ConvexCombination& f,
                                        const MonotoneMap& g);

}  // namespace pathint::convex
