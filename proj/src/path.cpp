#include "pathint/path.hpp"

#include <cmath>
#include <stdexcept>

namespace pathint {

std::vector<double> uniform_grid(double horizon, std::size_t cells) {
  if (!(horizon > 0.0)) throw std::invalid_argument("grid horizon must be positive");
  if (cells < 1) throw std::invalid_argument("grid needs at least one cell");
  std::vector<double> t(cells + 1);
  const double h = horizon / static_cast<double>(cells);
  for (std::size_t i = 0; i <= cells; ++i) t[i] = h * static_cast<double>(i);
  t.back() = horizon;
  return t;
}

SampledPath::SampledPath(std::vector<double> t, std::vector<double> x,
                         std::uint64_t seed, std::string label)
    : t_(std::move(t)), x_(std::move(x)), seed_(seed), label_(std::move(label)) {
  if (t_.size() != x_.size())
    throw std::invalid_argument("path grid/value size mismatch");
  if (t_.size() < 2) throw std::invalid_argument("path needs at least two points");
  if (t_.front() != 0.0) throw std::invalid_argument("path grid must start at 0");
  for (std::size_t i = 1; i < t_.size(); ++i)
    if (!(t_[i] > t_[i - 1]))
      throw std::invalid_argument("path grid must increase strictly");
  for (double v : x_)
    if (std::isnan(v)) throw std::invalid_argument("path values must not be NaN");
}

bool SampledPath::is_uniform() const {
  const double h = t_.back() / static_cast<double>(cells());
  for (std::size_t i = 0; i < t_.size(); ++i)
    if (std::fabs(t_[i] - h * static_cast<double>(i)) > 1e-9 * t_.back())
      return false;
  return true;
}

double SampledPath::uniform_step() const {
  if (!is_uniform())
    throw std::invalid_argument("operation requires a uniform grid");
  return t_.back() / static_cast<double>(cells());
}

bool SampledPath::same_grid(const SampledPath& other) const {
  return t_ == other.t_;
}

SampledPath SampledPath::with_values(std::vector<double> x, std::string label) const {
  return SampledPath(t_, std::move(x), seed_,
                     label.empty() ? label_ : std::move(label));
}

void BracketPath::validate() const {
  if (t.size() != v.size() || t.size() < 2)
    throw std::invalid_argument("bracket path shape mismatch");
  if (v.front() != 0.0) throw std::invalid_argument("bracket must start at 0");
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] < v[i - 1] - 1e-15)
      throw std::invalid_argument("bracket must be nondecreasing");
}

}  // namespace pathint
