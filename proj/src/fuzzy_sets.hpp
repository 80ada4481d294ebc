#pragma once

#include <utility>

namespace fuzzyshape {

/// Triangular type-1 membership function with optional shoulders.
///
/// A clamped left side holds membership at 1 for every x <= peak, a clamped
/// right side for every x >= peak. Edge terms of a partition use these so the
/// universe boundaries keep full membership.
class TriangularMF {
 public:
  /// Throws Error(InvalidMembershipFunction) unless a <= b <= c and a < c.
  TriangularMF(double a, double b, double c, bool clamp_left = false, bool clamp_right = false);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double c() const noexcept { return c_; }
  double peak() const noexcept { return b_; }
  bool clamp_left() const noexcept { return clamp_left_; }
  bool clamp_right() const noexcept { return clamp_right_; }

  double operator()(double x) const noexcept;

  friend bool operator==(const TriangularMF &, const TriangularMF &) = default;

 private:
  double a_;
  double b_;
  double c_;
  bool clamp_left_;
  bool clamp_right_;
};

double eval_t1(const TriangularMF &mf, double x) noexcept;

struct MembershipInterval {
  double lower;
  double upper;
};

/// Interval type-2 set: an upper triangle and a height-scaled lower triangle
/// bounding the footprint of uncertainty.
class IntervalType2MF {
 public:
  /// Throws Error(InvalidMembershipFunction) when lower_height is outside [0,1],
  /// the lower support escapes the upper support, or the scaled lower function
  /// exceeds the upper one anywhere.
  IntervalType2MF(TriangularMF upper, TriangularMF lower, double lower_height);

  /// Type-1 set viewed as a degenerate interval type-2 set.
  explicit IntervalType2MF(const TriangularMF &mf) : IntervalType2MF(mf, mf, 1.0) {}

  /// Lower triangle inset by `inset_fraction` of the upper support width on
  /// each side (never past the peak), shoulders copied from `upper`.
  static IntervalType2MF with_inset(const TriangularMF &upper, double inset_fraction, double lower_height);

  const TriangularMF &upper() const noexcept { return upper_; }
  const TriangularMF &lower() const noexcept { return lower_; }
  double lower_height() const noexcept { return lower_height_; }

  MembershipInterval operator()(double x) const noexcept;

  friend bool operator==(const IntervalType2MF &, const IntervalType2MF &) = default;

 private:
  TriangularMF upper_;
  TriangularMF lower_;
  double lower_height_;
};

MembershipInterval eval_t2(const IntervalType2MF &mf, double x) noexcept;

}  // namespace fuzzyshape
