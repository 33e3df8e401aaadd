#include "doctest.h"

#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <vector>

#include "pathint/rng.hpp"
#include "pathint/simd/kernels.hpp"

using pathint::kernels::Backend;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t stream) {
  auto eng = pathint::substream(9001, stream);
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& e : v) e = z(eng);
  return v;
}

const std::size_t kSizes[] = {0, 1, 2, 3, 4, 7, 8, 9, 15, 16, 17, 31, 64, 100, 257, 1000, 4097};

// long double references, independent of either backend
long double ref_dot(const std::vector<double>& x, const std::vector<double>& y) {
  long double acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += (long double)x[i] * y[i];
  return acc;
}

long double ref_sum(const std::vector<double>& x) {
  long double acc = 0;
  for (double e : x) acc += e;
  return acc;
}

void check_reduction(double got, long double want, double scale) {
  CHECK(std::fabs((double)(got - want)) <= 1e-12 * (scale + 1.0));
}

}  // namespace

TEST_CASE("reduction kernels match long-double references on both backends") {
  std::vector<const Backend*> backends{&pathint::kernels::scalar_backend()};
  if (pathint::kernels::avx2_supported())
    backends.push_back(&pathint::kernels::avx2_backend());

  for (const Backend* b : backends) {
    CAPTURE(b->name);
    for (std::size_t n : kSizes) {
      CAPTURE(n);
      auto x = random_vec(n, 2 * n);
      auto y = random_vec(n, 2 * n + 1);

      check_reduction(b->dot(x.data(), y.data(), n), ref_dot(x, y), (double)n);
      check_reduction(b->sum(x.data(), n), ref_sum(x), (double)n);

      long double ssd = 0, fwd = 0;
      for (std::size_t i = 1; i < n; ++i) {
        const long double d = (long double)x[i] - x[i - 1];
        ssd += d * d;
        fwd += (long double)x[i - 1] * ((long double)y[i] - y[i - 1]);
      }
      check_reduction(b->sum_sq_diff(x.data(), n), ssd, (double)n);
      check_reduction(b->forward_sum(x.data(), y.data(), n), fwd, (double)n);
    }
  }
}

TEST_CASE("elementwise kernels agree across backends") {
  if (!pathint::kernels::avx2_supported()) return;
  const Backend& s = pathint::kernels::scalar_backend();
  const Backend& v = pathint::kernels::avx2_backend();

  for (std::size_t n : kSizes) {
    CAPTURE(n);
    auto x = random_vec(n, 7 * n + 3);
    std::vector<double> ys(n), yv(n);
    for (std::size_t i = 0; i < n; ++i) ys[i] = yv[i] = x[n - 1 - i];

    s.axpy(0.37, x.data(), ys.data(), n);
    v.axpy(0.37, x.data(), yv.data(), n);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(ys[i] == doctest::Approx(yv[i]).epsilon(1e-15));

    std::vector<double> as(n), av(n);
    s.abs_diff(x.data(), 0.2, as.data(), n);
    v.abs_diff(x.data(), 0.2, av.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(as[i] == av[i]);
  }
}

TEST_CASE("masked clock sum uses strict bounds") {
  const double y[] = {1.0, 2.0, 3.0, 1.5, 2.5};
  const double dc[] = {10.0, 1.0, 100.0, 2.0, 4.0};
  std::vector<const Backend*> backends{&pathint::kernels::scalar_backend()};
  if (pathint::kernels::avx2_supported())
    backends.push_back(&pathint::kernels::avx2_backend());
  for (const Backend* b : backends) {
    CAPTURE(b->name);
    // endpoints 1.0 and 3.0 excluded
    CHECK(b->masked_clock_sum(y, dc, 5, 1.0, 3.0) == 7.0);
    CHECK(b->masked_clock_sum(y, dc, 5, -10.0, 10.0) == 117.0);
    CHECK(b->masked_clock_sum(y, dc, 5, 5.0, 6.0) == 0.0);
  }
}

TEST_CASE("max_fma handles empty input and agrees across backends") {
  const Backend& s = pathint::kernels::scalar_backend();
  CHECK(s.max_fma(nullptr, nullptr, nullptr, 0) ==
        -std::numeric_limits<double>::infinity());

  if (!pathint::kernels::avx2_supported()) return;
  const Backend& v = pathint::kernels::avx2_backend();
  CHECK(v.max_fma(nullptr, nullptr, nullptr, 0) ==
        -std::numeric_limits<double>::infinity());
  for (std::size_t n : kSizes) {
    if (n == 0) continue;
    CAPTURE(n);
    auto d = random_vec(n, 11 * n);
    auto w = random_vec(n, 11 * n + 1);
    auto g = random_vec(n, 11 * n + 2);
    const double a = s.max_fma(d.data(), w.data(), g.data(), n);
    const double b = v.max_fma(d.data(), w.data(), g.data(), n);
    CHECK(a == doctest::Approx(b).epsilon(1e-14));
  }
}

TEST_CASE("backend can be forced by name") {
  namespace k = pathint::kernels;
  k::force("scalar");
  CHECK(std::string(k::active().name) == "scalar");
  if (k::avx2_supported()) {
    k::force("avx2");
    CHECK(std::string(k::active().name) == "avx2");
  }
  k::force("auto");
  CHECK_THROWS(k::force("sse9"));
}

TEST_CASE("substreams are deterministic and distinct") {
  auto a1 = pathint::substream(42, 7);
  auto a2 = pathint::substream(42, 7);
  auto b = pathint::substream(42, 8);
  bool same = true, diff = false;
  for (int i = 0; i < 8; ++i) {
    const auto va = a1(), vb = a2(), vc = b();
    same = same && (va == vb);
    diff = diff || (va != vc);
  }
  CHECK(same);
  CHECK(diff);
}
