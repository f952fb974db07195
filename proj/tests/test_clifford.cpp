#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "monogenic/clifford.hpp"
#include "monogenic/error.hpp"

using namespace monogenic;
using namespace monogenic::clifford;

namespace {

bool near(const Multivector2& a, const Multivector2& b, double tol) {
  return (a - b).norm() <= tol;
}

// Cl(0,2) is the quaternions with e1 -> i, e2 -> j, e12 -> k. Hamilton product
// as an independent oracle for the multiplication table.
std::array<double, 4> hamilton(const std::array<double, 4>& p, const std::array<double, 4>& q) {
  return {p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3],
          p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2],
          p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1],
          p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0]};
}

Multivector2 random_mv(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  return {d(rng), d(rng), d(rng), d(rng)};
}

}  // namespace

TEST_CASE("basis products") {
  CHECK(kE1 * kE1 == Multivector2::scalar(-1.0));
  CHECK(kE2 * kE2 == Multivector2::scalar(-1.0));
  CHECK(kE12 * kE12 == Multivector2::scalar(-1.0));
  CHECK(kE1 * kE2 == kE12);
  CHECK(kE2 * kE1 == -kE12);
  CHECK(kE12 * kE1 == kE2);
  CHECK(kE1 * kE12 == -kE2);
  CHECK(kE2 * kE12 == kE1);
  CHECK(kE12 * kE2 == -kE1);
}

TEST_CASE("geometric product examples") {
  CHECK(scalar_part(kE1 * kE1) == -1.0);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const Multivector2 m = random_mv(rng);
    CHECK(kOne * m == m);
    CHECK(m * kOne == m);
  }
  CHECK(near((kOne + kE1) * (kOne - kE1), Multivector2::scalar(2.0), 0.0));
}

TEST_CASE("grade projections") {
  const Multivector2 m{3.0, 2.0, 0.0, 1.0};
  CHECK(scalar_part(m) == 3.0);
  CHECK(vector_part(m) == Multivector2::vector(2.0, 0.0));
  CHECK(bivector_part(m) == Multivector2::bivector(1.0));
  CHECK(vector_part(kE1 * kE2) == Multivector2{});
  const Multivector2 triple = kE1 * kE2 * kE1;
  CHECK(bivector_part(triple) == Multivector2{});
  // e1 e2 e1 = -e1 e1 e2 = +e2 with e1^2 = -1.
  CHECK(vector_part(triple) == kE2);
}

TEST_CASE("paravector inverse examples") {
  CHECK(paravector_inverse(Multivector2::scalar(2.0)) == Multivector2::scalar(0.5));
  CHECK(near(paravector_inverse(kOne + kE1), (kOne - kE1) * 0.5, 1e-15));
  try {
    paravector_inverse(Multivector2{});
    FAIL("expected ZeroNorm");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroNorm);
  }
  try {
    paravector_inverse(kOne + kE12);
    FAIL("expected InvalidArgument");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
  // The threshold is configurable.
  CHECK_NOTHROW(paravector_inverse(Multivector2::scalar(1e-14), 1e-15));
  CHECK_THROWS_AS(paravector_inverse(Multivector2::scalar(1e-14)), Error);
}

TEST_CASE("exp_vector examples") {
  CHECK(near(exp_vector(kE1, 0.0), kOne, 0.0));
  CHECK(near(exp_vector(kE1, std::numbers::pi / 2), kE1, 1e-16));
  const double r = std::sqrt(2.0) / 2.0;
  CHECK(near(exp_vector(kE2 * 3.0, std::numbers::pi / 4), (kOne + kE2) * r, 1e-15));
  CHECK_THROWS_AS(exp_vector(Multivector2{}, 1.0), Error);
}

TEST_CASE("anti-commutation is exact") {
  const std::array<Multivector2, 2> e{kE1, kE2};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const Multivector2 sum = e[i] * e[j] + e[j] * e[i];
      CHECK(sum == Multivector2::scalar(i == j ? -2.0 : 0.0));
    }
  }
}

TEST_CASE("vector square is minus the squared norm for 10^4 random vectors") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> d(-10.0, 10.0);
  for (int i = 0; i < 10000; ++i) {
    const Multivector2 v = Multivector2::vector(d(rng), d(rng));
    const double n2 = v.c1 * v.c1 + v.c2 * v.c2;
    const Multivector2 sq = v * v;
    REQUIRE(std::abs(sq.s0 + n2) <= 1e-12 * std::max(1.0, n2));
    REQUIRE(sq.c1 == 0.0);
    REQUIRE(sq.c2 == 0.0);
    REQUIRE(std::abs(sq.c12) <= 1e-12 * std::max(1.0, n2));
  }
}

TEST_CASE("product agrees with the quaternion oracle and is associative") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 2000; ++i) {
    const Multivector2 a = random_mv(rng);
    const Multivector2 b = random_mv(rng);
    const Multivector2 c = random_mv(rng);
    const auto q = hamilton({a.s0, a.c1, a.c2, a.c12}, {b.s0, b.c1, b.c2, b.c12});
    REQUIRE(near(a * b, {q[0], q[1], q[2], q[3]}, 1e-12));
    REQUIRE(near((a * b) * c, a * (b * c), 1e-12));
    REQUIRE(near(a * (b + c), a * b + a * c, 1e-12));
  }
}

TEST_CASE("exp(v, theta) exp(v, -theta) = 1") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  for (int i = 0; i < 5000; ++i) {
    const Multivector2 v = Multivector2::vector(d(rng), d(rng));
    if (v.norm() < 1e-6) continue;
    const double t = 2.0 * d(rng);
    REQUIRE(near(exp_vector(v, t) * exp_vector(v, -t), kOne, 1e-12));
    REQUIRE(std::abs(exp_vector(v, t).norm() - 1.0) <= 1e-12);
  }
}

TEST_CASE("paravector inverse is two-sided") {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> d(-5.0, 5.0);
  for (int i = 0; i < 5000; ++i) {
    const Multivector2 m = Multivector2::paravector(d(rng), d(rng), d(rng));
    if (m.norm() < 1e-3) continue;
    const Multivector2 inv = paravector_inverse(m);
    REQUIRE(near(m * inv, kOne, 1e-12));
    REQUIRE(near(inv * m, kOne, 1e-12));
  }
}

TEST_CASE("conjugate reverses products of paravectors") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 500; ++i) {
    const Multivector2 a = random_mv(rng);
    const Multivector2 b = random_mv(rng);
    REQUIRE(near(conjugate(a * b), conjugate(b) * conjugate(a), 1e-12));
  }
}
