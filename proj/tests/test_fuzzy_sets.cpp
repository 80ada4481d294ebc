#include <doctest.h>

#include <cmath>

#include "error.hpp"
#include "fuzzy_sets.hpp"
#include "support.hpp"

using namespace fuzzyshape;
using namespace fzs_test;

TEST_CASE("eval_t1 on a plain triangle") {
  const TriangularMF mf(30, 40, 50);
  CHECK(eval_t1(mf, 40) == 1.0);
  CHECK(eval_t1(mf, 45) == doctest::Approx(0.5));
  CHECK(eval_t1(mf, 35) == doctest::Approx(0.5));
  CHECK(eval_t1(mf, 25) == 0.0);
  CHECK(eval_t1(mf, 50) == 0.0);
  CHECK(eval_t1(mf, 75) == 0.0);
}

TEST_CASE("eval_t1 of the default eye Normal term at 42") {
  const auto &eye = default_registry().system(SystemKey::Eye).input();
  const auto &normal = eye.terms()[*eye.index_of("Normal")].mf;
  CHECK(normal.a() == 30);
  CHECK(normal.b() == 38);
  CHECK(normal.c() == 48);
  CHECK(std::abs(eval_t1(normal, 42) - 0.6) < 1e-12);
}

TEST_CASE("shoulders hold full membership beyond the peak") {
  const TriangularMF left(0, 20, 30, true, false);
  CHECK(left(0) == 1.0);
  CHECK(left(-5) == 1.0);
  CHECK(left(20) == 1.0);
  CHECK(left(25) == doctest::Approx(0.5));
  CHECK(left(30) == 0.0);

  const TriangularMF right(48, 60, 100, false, true);
  CHECK(right(100) == 1.0);
  CHECK(right(1000) == 1.0);
  CHECK(right(54) == doctest::Approx(0.5));
  CHECK(right(48) == 0.0);
}

TEST_CASE("triangle construction rejects malformed parameters") {
  auto code_of = [](auto make) {
    try {
      make();
    } catch (const Error &e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(code_of([] { TriangularMF(40, 30, 50); }) == ErrorCode::InvalidMembershipFunction);
  CHECK(code_of([] { TriangularMF(30, 60, 50); }) == ErrorCode::InvalidMembershipFunction);
  CHECK(code_of([] { TriangularMF(40, 40, 40); }) == ErrorCode::InvalidMembershipFunction);
  CHECK(code_of([] { TriangularMF(0, NAN, 10); }) == ErrorCode::InvalidMembershipFunction);
  CHECK_NOTHROW(TriangularMF(0, 0, 10));
  CHECK_NOTHROW(TriangularMF(0, 10, 10));

  try {
    TriangularMF(40, 30, 50);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(std::string(e.what()).find("a <= b <= c") != std::string::npos);
  }
  try {
    TriangularMF(40, 40, 40);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(std::string(e.what()).find("zero width") != std::string::npos);
  }
}

TEST_CASE("eval_t1 matches the hand formula, stays in [0,1] and hits 1 at the peak") {
  auto g = rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const auto mf = random_triangle(g, 0, 100, 0.5);
    CHECK(mf(mf.b()) == 1.0);
    for (int k = 0; k < 20; ++k) {
      const double x = uniform(g, -10, 110);
      const double v = eval_t1(mf, x);
      REQUIRE(v >= 0.0);
      REQUIRE(v <= 1.0);
      REQUIRE(std::abs(v - tri(mf, x)) < 1e-12);
    }
  }
}

TEST_CASE("eval_t1 is Lipschitz with constant max(1/(b-a), 1/(c-b))") {
  auto g = rng(12);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto mf = random_triangle(g, 0, 100, 0.5);
    const double lip = std::max(1.0 / (mf.b() - mf.a()), 1.0 / (mf.c() - mf.b()));
    const double x = uniform(g, -5, 105);
    const double y = uniform(g, -5, 105);
    REQUIRE(std::abs(mf(x) - mf(y)) <= lip * std::abs(x - y) + 1e-12);
  }
}

TEST_CASE("symmetric triangles evaluate symmetrically about the peak") {
  auto g = rng(13);
  for (int trial = 0; trial < 1000; ++trial) {
    const double b = uniform(g, 10, 90);
    const double half = uniform(g, 0.5, 10);
    const TriangularMF mf(b - half, b, b + half);
    const double d = uniform(g, 0, 15);
    REQUIRE(std::abs(mf(b - d) - mf(b + d)) < 1e-9);
  }
}

TEST_CASE("eval_t2 examples") {
  const IntervalType2MF mf2(TriangularMF(30, 40, 50), TriangularMF(34, 40, 46), 0.8);
  const auto at40 = eval_t2(mf2, 40);
  CHECK(at40.lower == doctest::Approx(0.8));
  CHECK(at40.upper == 1.0);

  // Pointwise oracle: the lower triangle has left its support at 47, the
  // upper one is on its falling edge.
  const auto at47 = eval_t2(mf2, 47);
  CHECK(at47.lower == 0.0);
  CHECK(std::abs(at47.upper - (50.0 - 47.0) / (50.0 - 40.0)) < 1e-12);
  CHECK(at47.upper == doctest::Approx(0.3));

  for (double x = 25; x <= 55; x += 0.25) {
    const auto m = eval_t2(mf2, x);
    REQUIRE(std::abs(m.lower - 0.8 * tri(34, 40, 46, false, false, x)) < 1e-12);
    REQUIRE(std::abs(m.upper - tri(30, 40, 50, false, false, x)) < 1e-12);
  }
}

TEST_CASE("degenerate interval type-2 sets are exactly type-1") {
  auto g = rng(14);
  for (int trial = 0; trial < 200; ++trial) {
    const auto mf = random_triangle(g, 0, 100);
    const IntervalType2MF deg(mf);
    const auto inset0 = IntervalType2MF::with_inset(mf, 0.0, 1.0);
    CHECK(inset0 == deg);
    for (int k = 0; k < 10; ++k) {
      const double x = uniform(g, 0, 100);
      const auto m = eval_t2(deg, x);
      REQUIRE(m.lower == eval_t1(mf, x));
      REQUIRE(m.upper == eval_t1(mf, x));
    }
  }
}

TEST_CASE("lower <= upper at 1000 points for every configured output term") {
  for (auto key : kAllSystems) {
    const auto &out = default_registry().system(key).output();
    const auto u = out.universe();
    for (const auto &t : out.terms()) {
      for (int i = 0; i < 1000; ++i) {
        const double x = u.lo + (u.hi - u.lo) * i / 999.0;
        const auto m = eval_t2(t.mf, x);
        REQUIRE(0.0 <= m.lower);
        REQUIRE(m.lower <= m.upper);
        REQUIRE(m.upper <= 1.0);
      }
    }
  }
}

TEST_CASE("interval type-2 construction checks height and containment") {
  const TriangularMF up(30, 40, 50);
  CHECK_THROWS_AS(IntervalType2MF(up, TriangularMF(34, 40, 46), 1.5), Error);
  CHECK_THROWS_AS(IntervalType2MF(up, TriangularMF(34, 40, 46), -0.1), Error);
  CHECK_THROWS_AS(IntervalType2MF(up, TriangularMF(25, 40, 46), 0.8), Error);
  CHECK_THROWS_AS(IntervalType2MF(up, TriangularMF(30, 45, 50), 1.0), Error);
  CHECK_THROWS_AS(IntervalType2MF::with_inset(up, 0.5, 0.9), Error);
  CHECK_NOTHROW(IntervalType2MF(up, TriangularMF(30, 45, 50), 0.5));

  const auto inset = IntervalType2MF::with_inset(up, 0.1, 0.9);
  CHECK(inset.lower().a() == doctest::Approx(32));
  CHECK(inset.lower().b() == 40);
  CHECK(inset.lower().c() == doctest::Approx(48));
  CHECK(inset.lower_height() == 0.9);
}
