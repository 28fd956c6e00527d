#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "eigenrisk/errors.hpp"
#include "eigenrisk/rng.hpp"

namespace rng = eigenrisk::rng;
using eigenrisk::usage_error;

TEST_SUITE("rng") {

TEST_CASE("splitmix64 reproduces the reference sequence") {
  std::uint64_t state = 0;
  CHECK(rng::splitmix64(state) == 0xE220A8397B1DCDAFull);
  CHECK(rng::splitmix64(state) == 0x6E789E6AA1B965F4ull);
  CHECK(rng::splitmix64(state) == 0x06C45D188009454Full);
}

TEST_CASE("streams are deterministic and order-independent") {
  rng::Stream a(12345, 7);
  rng::Stream b(12345, 7);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  // Different stream ids (and different master seeds) must decorrelate.
  rng::Stream c(12345, 8);
  rng::Stream d(12346, 7);
  rng::Stream base(12345, 7);
  int same_c = 0, same_d = 0;
  for (int i = 0; i < 64; ++i) {
    std::uint64_t v = base.next_u64();
    if (v == c.next_u64()) ++same_c;
    if (v == d.next_u64()) ++same_d;
  }
  CHECK(same_c == 0);
  CHECK(same_d == 0);
}

TEST_CASE("uniform01 stays inside [0,1) with a sane mean") {
  rng::Stream stream(2024, 0);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    double u = stream.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / 100000 - 0.5) < 0.01);
}

TEST_CASE("normal moments") {
  rng::Stream stream(2024, 1);
  double sum = 0.0, sum_sq = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    double z = stream.normal();
    sum += z;
    sum_sq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.02);
  CHECK(std::abs(sum_sq / n - 1.0) < 0.03);
}

TEST_CASE("sphere points are unit norm and isotropic") {
  rng::Stream stream(99, 3);
  const int n = 20000, d = 3;
  std::vector<double> mean(d, 0.0);
  double x[8];
  for (int i = 0; i < n; ++i) {
    stream.sphere_point(d, x);
    double norm_sq = 0.0;
    for (int j = 0; j < d; ++j) {
      norm_sq += x[j] * x[j];
      mean[j] += x[j];
    }
    REQUIRE(std::abs(std::sqrt(norm_sq) - 1.0) <= 1e-12);
  }
  // Coordinate std dev is 1/sqrt(3); 4 standard errors of the mean.
  double band = 4.0 / std::sqrt(3.0 * n);
  for (int j = 0; j < d; ++j) CHECK(std::abs(mean[j] / n) <= band);
}

TEST_CASE("pairwise dot products in d=8 average to zero") {
  rng::Stream stream(99, 4);
  const int n = 2000, d = 8;
  std::vector<double> pts(static_cast<std::size_t>(n) * d);
  for (int i = 0; i < n; ++i) stream.sphere_point(d, &pts[i * d]);
  double sum = 0.0;
  long long pairs = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < i + 8 && j < n; ++j) {
      double dot = 0.0;
      for (int t = 0; t < d; ++t) dot += pts[i * d + t] * pts[j * d + t];
      sum += dot;
      ++pairs;
    }
  // Var(dot) = 1/d for independent uniform sphere points.
  double band = 4.0 / std::sqrt(static_cast<double>(d) * pairs);
  CHECK(std::abs(sum / pairs) <= band);
}

TEST_CASE("sphere_point validates the dimension") {
  rng::Stream stream(1, 1);
  double out[4];
  CHECK_THROWS_AS(stream.sphere_point(1, out), usage_error);
}

}  // TEST_SUITE
