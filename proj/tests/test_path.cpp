#include "doctest.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "pathint/path.hpp"

using pathint::BracketPath;
using pathint::SampledPath;
using pathint::uniform_grid;

TEST_CASE("uniform_grid pins both endpoints") {
  auto t = uniform_grid(2.0, 4);
  REQUIRE(t.size() == 5);
  CHECK(t[0] == 0.0);
  CHECK(t[2] == doctest::Approx(1.0));
  CHECK(t[4] == 2.0);  // exact, not accumulated
}

TEST_CASE("sampled path validates its inputs") {
  auto t = uniform_grid(1.0, 4);
  std::vector<double> x(5, 0.0);

  CHECK_NOTHROW(SampledPath(t, x));
  CHECK_THROWS_AS(SampledPath(t, std::vector<double>(4, 0.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(SampledPath({0.0}, {1.0}), std::invalid_argument);

  auto bad_start = t;
  bad_start[0] = 0.1;
  CHECK_THROWS_AS(SampledPath(bad_start, x), std::invalid_argument);

  auto not_increasing = t;
  not_increasing[2] = not_increasing[1];
  CHECK_THROWS_AS(SampledPath(not_increasing, x), std::invalid_argument);

  auto nan_value = x;
  nan_value[3] = std::nan("");
  CHECK_THROWS_AS(SampledPath(t, nan_value), std::invalid_argument);

  auto inf_value = x;  // boundary singularities are representable
  inf_value[0] = std::numeric_limits<double>::infinity();
  CHECK_NOTHROW(SampledPath(t, inf_value));
}

TEST_CASE("uniform step detection") {
  SampledPath u(uniform_grid(1.0, 8), std::vector<double>(9, 0.0));
  CHECK(u.is_uniform());
  CHECK(u.uniform_step() == doctest::Approx(0.125));

  SampledPath w({0.0, 0.1, 0.5, 1.0}, std::vector<double>(4, 0.0));
  CHECK_FALSE(w.is_uniform());
  CHECK_THROWS_AS(w.uniform_step(), std::invalid_argument);
}

TEST_CASE("bracket path shape checks") {
  BracketPath ok{uniform_grid(1.0, 4), {0.0, 0.1, 0.2, 0.2, 0.5}};
  CHECK_NOTHROW(ok.validate());

  BracketPath bad_origin{uniform_grid(1.0, 2), {0.1, 0.2, 0.3}};
  CHECK_THROWS_AS(bad_origin.validate(), std::invalid_argument);

  BracketPath decreasing{uniform_grid(1.0, 2), {0.0, 0.5, 0.4}};
  CHECK_THROWS_AS(decreasing.validate(), std::invalid_argument);
}

TEST_CASE("with_values keeps the grid and seed") {
  SampledPath p(uniform_grid(1.0, 4), {0, 1, 2, 3, 4}, 77, "base");
  auto q = p.with_values({0, -1, -2, -3, -4}, "neg");
  CHECK(q.same_grid(p));
  CHECK(q.seed() == 77);
  CHECK(q.label() == "neg");
  CHECK(q.x()[2] == -2.0);
}
