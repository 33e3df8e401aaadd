#pragma once
#include <cstdint>
#include <string>
#include <vector>

namespace pathint {

std::vector<double> uniform_grid(double horizon, std::size_t cells);

// A process observed on a fixed time grid.  Grids start at 0 and increase
// strictly; values may be infinite (boundary singularities of the
// fractional derivative) but never NaN.  Immutable once built.
class SampledPath {
 public:
  SampledPath(std::vector<double> t, std::vector<double> x,
              std::uint64_t seed = 0, std::string label = {});

  const std::vector<double>& t() const { return t_; }
  const std::vector<double>& x() const { return x_; }
  double horizon() const { return t_.back(); }
  std::size_t points() const { return t_.size(); }
  std::size_t cells() const { return t_.size() - 1; }
  std::uint64_t seed() const { return seed_; }
  const std::string& label() const { return label_; }

  // Uniform spacing or throws; most operators here require it.
  double uniform_step() const;
  bool is_uniform() const;

  // Same grid object/values as another path (exact comparison).
  bool same_grid(const SampledPath& other) const;

  SampledPath with_values(std::vector<double> x, std::string label = {}) const;

 private:
  std::vector<double> t_, x_;
  std::uint64_t seed_ = 0;
  std::string label_;
};

// Nondecreasing clock on a grid (quadratic variation, martingale bracket).
// v[0] == 0.
struct BracketPath {
  std::vector<double> t, v;
  void validate() const;  // throws std::invalid_argument on shape problems
};

}  // namespace pathint
