#include "fuzzy_sets.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <fmt/format.h>

#include "error.hpp"

namespace fuzzyshape {

TriangularMF::TriangularMF(double a, double b, double c, bool clamp_left, bool clamp_right)
    : a_(a), b_(b), c_(c), clamp_left_(clamp_left), clamp_right_(clamp_right) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) {
    throw Error(ErrorCode::InvalidMembershipFunction,
                fmt::format("triangle ({}, {}, {}) has non-finite parameters", a, b, c));
  }
  if (a > b || b > c) {
    throw Error(ErrorCode::InvalidMembershipFunction,
                fmt::format("triangle ({}, {}, {}) violates a <= b <= c", a, b, c));
  }
  if (a == c) {
    throw Error(ErrorCode::InvalidMembershipFunction,
                fmt::format("triangle ({}, {}, {}) has zero width", a, b, c));
  }
}

double TriangularMF::operator()(double x) const noexcept {
  if (x == b_) return 1.0;
  if (x < b_) {
    if (clamp_left_) return 1.0;
    if (x <= a_) return 0.0;
    return (x - a_) / (b_ - a_);
  }
  if (clamp_right_) return 1.0;
  if (x >= c_) return 0.0;
  return (c_ - x) / (c_ - b_);
}

double eval_t1(const TriangularMF &mf, double x) noexcept { return mf(x); }

IntervalType2MF::IntervalType2MF(TriangularMF upper, TriangularMF lower, double lower_height)
    : upper_(upper), lower_(lower), lower_height_(lower_height) {
  if (!(lower_height >= 0.0 && lower_height <= 1.0)) {
    throw Error(ErrorCode::InvalidMembershipFunction,
                fmt::format("lower height {} outside [0, 1]", lower_height));
  }
  const bool left_ok = upper.clamp_left() || (!lower.clamp_left() && lower.a() >= upper.a());
  const bool right_ok = upper.clamp_right() || (!lower.clamp_right() && lower.c() <= upper.c());
  if (!left_ok || !right_ok) {
    throw Error(ErrorCode::InvalidMembershipFunction,
                fmt::format("lower support [{}, {}] not contained in upper support [{}, {}]", lower.a(),
                            lower.c(), upper.a(), upper.c()));
  }
  // Both functions are piecewise linear, so the bound only needs checking at
  // the breakpoints and just beside them (left-degenerate triangles jump).
  const std::array<double, 6> knots{upper.a(), upper.b(), upper.c(), lower.a(), lower.b(), lower.c()};
  const double eps = 1e-9 * (upper.c() - upper.a());
  for (double k : knots) {
    for (double x : {k - eps, k, k + eps}) {
      if (lower_height * lower(x) > upper(x) + 1e-12) {
        throw Error(ErrorCode::InvalidMembershipFunction,
                    fmt::format("scaled lower membership exceeds upper membership at x = {}", x));
      }
    }
  }
}

IntervalType2MF IntervalType2MF::with_inset(const TriangularMF &upper, double inset_fraction,
                                            double lower_height) {
  if (!(inset_fraction >= 0.0 && inset_fraction < 0.5)) {
    throw Error(ErrorCode::InvalidMembershipFunction,
                fmt::format("FOU inset fraction {} outside [0, 0.5)", inset_fraction));
  }
  const double width = upper.c() - upper.a();
  const double a = std::min(upper.b(), upper.a() + inset_fraction * width);
  const double c = std::max(upper.b(), upper.c() - inset_fraction * width);
  return IntervalType2MF(upper, TriangularMF(a, upper.b(), c, upper.clamp_left(), upper.clamp_right()),
                         lower_height);
}

MembershipInterval IntervalType2MF::operator()(double x) const noexcept {
  return {lower_height_ * lower_(x), upper_(x)};
}

MembershipInterval eval_t2(const IntervalType2MF &mf, double x) noexcept { return mf(x); }

}  // namespace fuzzyshape
