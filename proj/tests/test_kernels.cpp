#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "dfpcrc/kernels.hpp"

using namespace dfpcrc::kernels;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("scalar kernels on small fixtures") {
  const auto& k = table(Isa::scalar);
  const double a[] = {1, 2, 3};
  const double b[] = {4, -5, 6};
  CHECK(k.dot(a, b, 3) == 12.0);
  CHECK(k.sum(a, 3) == 6.0);
  CHECK(k.max_abs_diff(a, b, 3) == 7.0);
  double y[] = {1, 1, 1};
  k.axpy(2.0, a, y, 3);
  CHECK(y[2] == 7.0);
  k.scale(0.5, y, 3);
  CHECK(y[0] == 1.5);
  const std::uint32_t idx[] = {2, 0};
  const double vals[] = {10, 100};
  CHECK(k.sparse_dot(vals, idx, a, 2) == 130.0);
  CHECK(k.dot(a, b, 0) == 0.0);
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
  if (!isa_supported(Isa::avx2)) {
    CHECK_THROWS_AS(table(Isa::avx2), std::invalid_argument);
    return;
  }
  const auto& s = table(Isa::scalar);
  const auto& v = table(Isa::avx2);
  std::mt19937_64 rng(7);
  for (std::size_t n = 0; n <= 100; ++n) {
    CAPTURE(n);
    const auto a = random_vector(rng, n);
    const auto b = random_vector(rng, n);
    CHECK(close(s.dot(a.data(), b.data(), n), v.dot(a.data(), b.data(), n)));
    CHECK(close(s.sum(a.data(), n), v.sum(a.data(), n)));
    CHECK(s.max_abs_diff(a.data(), b.data(), n) == v.max_abs_diff(a.data(), b.data(), n));

    auto y1 = b, y2 = b;
    s.axpy(0.75, a.data(), y1.data(), n);
    v.axpy(0.75, a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(close(y1[i], y2[i]));
    s.scale(-1.25, y1.data(), n);
    v.scale(-1.25, y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(close(y1[i], y2[i]));

    std::vector<std::uint32_t> idx(n);
    for (auto& i : idx) i = static_cast<std::uint32_t>(rng() % (n + 1));
    const auto x = random_vector(rng, n + 1);
    CHECK(close(s.sparse_dot(a.data(), idx.data(), x.data(), n), v.sparse_dot(a.data(), idx.data(), x.data(), n)));
  }
}

TEST_CASE("isa names round-trip and selection sticks") {
  for (Isa isa : {Isa::scalar, Isa::avx2}) CHECK(parse_isa(isa_name(isa)) == isa);
  CHECK_FALSE(parse_isa("sse9").has_value());
  const Isa before = active_isa();
  set_active_isa(Isa::scalar);
  CHECK(active_isa() == Isa::scalar);
  const std::vector<double> x = {3, 4};
  CHECK(norm2(x) == 5.0);
  set_active_isa(before);
}

TEST_CASE("span wrappers reject mismatched lengths") {
  const std::vector<double> a = {1, 2};
  const std::vector<double> b = {1};
  CHECK_THROWS(dot(a, b));
}

}
