#pragma once
#include <cstddef>

#include "pathint/path.hpp"

// Riemann-Liouville fractional integrals and Weyl-form fractional
// derivatives of sampled paths, plus the two fractional Besov-type norm
// estimates used to decide whether a pathwise integral is defined.
//
// All operators interpolate the samples piecewise-linearly and integrate the
// power kernel exactly against each linear piece, so smooth inputs are
// reproduced to near machine precision and rough inputs get the correct
// singular-cell treatment near coincident arguments.  Right-sided operators
// use the real-valued convention (prefactor magnitude 1/Gamma, orientation
// s -> horizon); uniform grids are required.

namespace pathint::frac {

enum class Side { left, right };

struct FracOperator {
  Side side = Side::left;
  double order = 0.5;  // must lie in (0,1)
};

// (I^b f)(t_i) on the path grid.  Left: integrate from 0; right: toward T.
SampledPath frac_integral(const SampledPath& f, const FracOperator& op);

// Weyl-form derivative on the grid.  At t=0 (left side) the value is 0 when
// f(0)=0 and +/-inf otherwise (the s^-b singularity); mirrored for the right
// side at t=T.
SampledPath frac_derivative(const SampledPath& f, const FracOperator& op);

struct NormEstimate {
  double value = 0.0;
  double first = 0.0;   // Hoelder-type / weighted-endpoint component
  double second = 0.0;  // singular-integral component
  double beta = 0.0;
  std::size_t grid_cells = 0;
};

// sup-based norm: sup over grid pairs s<t of |f(t)-f(s)|/(t-s)^b plus the
// integral of |f(u)-f(s)|/(u-s)^{1+b} over (s,t).  Components are the two
// terms at the maximizing pair; value = first + second.
NormEstimate besov_w1_norm(const SampledPath& f, double beta);

// integral norm: int |f(s)|/s^b ds + double singular integral; value is the
// sum of the two components.
NormEstimate besov_w2_norm(const SampledPath& f, double beta);

}  // namespace pathint::frac
