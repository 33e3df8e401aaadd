#pragma once
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pathint/path.hpp"

// Centered Gaussian process models: closed-form covariance kernels,
// diagnostics for the regularity class the pathwise theory needs, and exact
// sampling by conditional-mean recursion (uniform grids) or dense
// factorization (arbitrary grids).

namespace pathint::gauss {

struct CovarianceModel {
  enum class Kind { fbm, stationary, martingale };

  Kind kind = Kind::fbm;
  double horizon = 1.0;
  std::string label;

  double hurst = 0.5;                     // fbm only
  std::function<double(double)> r;        // stationary: r(u), u >= 0
  std::function<double(double)> bracket;  // martingale: b(t), b(0)=0, nondecreasing

  static CovarianceModel fractional(double hurst, double horizon,
                                    std::string label = {});
  static CovarianceModel stationary_r(std::function<double(double)> r,
                                      double horizon, std::string label = {});
  static CovarianceModel gaussian_martingale(std::function<double(double)> bracket,
                                             double horizon,
                                             std::string label = {});

  const std::string& name() const;  // label, or a kind default
};

struct KernelValues {
  double R = 0.0;   // covariance R(t,s)
  double W = 0.0;   // incremental variance E[(X_t-X_s)^2]
  double Vs = 0.0;  // variance at s
  double Vt = 0.0;  // variance at t
};

// Closed-form kernel evaluation; throws when s or t leaves [0, horizon].
KernelValues eval_kernel(const CovarianceModel& m, double s, double t);

double variance(const CovarianceModel& m, double t);

// w*(t) = sup over s of the incremental variance at gap t.  Closed form for
// fbm and stationary models; grid supremum (resolution cells) for
// martingales, whose bracket increments need not be largest anywhere fixed.
double worst_case_increment(const CovarianceModel& m, double t,
                            std::size_t resolution = 512);

// -------------------------------------------------------------------------
// Membership in the regularity class used throughout: strictly positive
// covariance, worst-case incremental variance ~ t^{2a} at 0, variance floor
// V(s) >= c s^2 near 0, and a bounded near-diagonal covariance ratio.

struct MembershipConfig {
  double exponent_tol = 0.03;    // |fitted w* exponent - 2a| allowed
  double fit_rms_max = 0.05;     // log-log fit rms above this -> inconclusive
  std::size_t fit_points = 24;   // log-spaced points in [T*1e-4, T*1e-1]
  double delta_fraction = 0.1;   // delta = T * this
  double ratio_cap = 1e3;        // near-diagonal ratio treated as unbounded above this
  std::size_t ratio_grid = 50;   // t-cells and s-cells of the ratio scan
  std::size_t positivity_grid = 64;
  double variance_exp_slack = 0.05;  // fitted V exponent must be <= 2 + slack
  std::size_t sup_resolution = 512;  // grid for martingale w*
};

struct ConditionReport {
  bool pass = false;
  double statistic = 0.0;
  std::string detail;
};

struct MembershipReport {
  enum class Verdict { member, non_member, inconclusive };

  double alpha = 0.0;
  ConditionReport positive_R;     // (i)  min R over the scan grid, worst pair
  ConditionReport w_star_fit;     // (ii) fitted exponent vs 2*alpha
  ConditionReport variance_floor; // (iii) c with V(s) >= c s^2 on (0, delta]
  ConditionReport ratio_bound;    // (iv) sup R(s,s)/R(t,s) near the diagonal

  double w_exponent = 0.0;
  double w_fit_rms = 0.0;
  double c_floor = 0.0;
  double delta = 0.0;
  double ratio_sup = 0.0;

  Verdict verdict = Verdict::inconclusive;
  const char* verdict_name() const;
};

MembershipReport check_class_membership(const CovarianceModel& m, double alpha,
                                        const MembershipConfig& cfg = {});

// -------------------------------------------------------------------------
// Sampling.  Exact draws from the model law on the grid; deterministic for a
// given seed, with replica p drawing from substream (seed, p) so results do
// not depend on batching.  Uniform grids use the conditional-mean recursion
// (up to 2^14 cells); other grids fall back to dense factorization with a
// bounded jitter ladder (up to 2^12 cells).  Failures throw naming the model
// and grid size.

std::vector<SampledPath> sample_paths(const CovarianceModel& m,
                                      const std::vector<double>& grid,
                                      std::size_t n_paths, std::uint64_t seed);

// Martingale-plus-smooth sum Y = M + X: M has independent Gaussian
// increments with variance d<M> from the bracket, X is an fbm part with
// hurst > 1/2 (scaled by hoelder_scale; 0 drops it).  With coupled set, the
// X innovations are rho * (M innovation) + sqrt(1-rho^2) * (fresh draw),
// rho in [-1/2, 1/2]; the processes are then dependent but Y is still
// exactly M + X.
struct MixedModel {
  std::function<double(double)> bracket;
  double hurst = 0.75;
  double hoelder_scale = 1.0;
  double horizon = 1.0;
  bool coupled = false;
  double rho = 0.0;
  std::string label;

  const std::string& name() const;
};

struct MixedEnsemble {
  SampledPath y, m, x;
  BracketPath bracket;
};

std::vector<MixedEnsemble> sample_mixed(const MixedModel& spec,
                                        const std::vector<double>& grid,
                                        std::size_t n_paths,
                                        std::uint64_t seed);

}  // namespace pathint::gauss
