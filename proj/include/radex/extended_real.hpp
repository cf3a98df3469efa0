#pragma once

#include <compare>
#include <limits>
#include <string>

namespace radex {

/// A value of R ∪ {-inf, +inf}. NaN is never representable; constructing
/// from NaN throws EvaluationFault.
class ExtendedReal {
 public:
  enum class Tag { MinusInfinity, Finite, PlusInfinity };

  constexpr ExtendedReal() = default;
  // Implicit on purpose: any double (including ±inf) that is not NaN is a valid value.
  ExtendedReal(double v);  // NOLINT

  static constexpr ExtendedReal plus_infinity() { return ExtendedReal(Raw{}, kInf); }
  static constexpr ExtendedReal minus_infinity() { return ExtendedReal(Raw{}, -kInf); }

  constexpr Tag tag() const {
    if (v_ == kInf) return Tag::PlusInfinity;
    if (v_ == -kInf) return Tag::MinusInfinity;
    return Tag::Finite;
  }
  constexpr bool is_finite() const { return tag() == Tag::Finite; }
  constexpr bool is_plus_infinity() const { return v_ == kInf; }
  constexpr bool is_minus_infinity() const { return v_ == -kInf; }

  /// Finite value; throws if infinite.
  double value() const;
  /// Underlying double, infinities included.
  constexpr double raw() const { return v_; }

  // Total order: -inf < finite < +inf. Safe because NaN is excluded.
  friend constexpr bool operator==(ExtendedReal a, ExtendedReal b) { return a.v_ == b.v_; }
  friend constexpr std::partial_ordering operator<=>(ExtendedReal a, ExtendedReal b) {
    return a.v_ <=> b.v_;
  }

  ExtendedReal operator-() const { return ExtendedReal(Raw{}, -v_); }

  std::string to_string() const;

 private:
  struct Raw {};
  static constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr ExtendedReal(Raw, double v) : v_(v) {}

  double v_ = 0.0;
};

/// a - b; throws EvaluationFault on (+inf) - (+inf) and similar.
ExtendedReal sub(ExtendedReal a, ExtendedReal b);
/// a / t for finite positive t.
ExtendedReal div_pos(ExtendedReal a, double t);
/// λ·a for λ > 0 (0·a = 0 by convention for the homogeneity identity).
ExtendedReal scale_nonneg(double lambda, ExtendedReal a);

ExtendedReal min(ExtendedReal a, ExtendedReal b);
ExtendedReal max(ExtendedReal a, ExtendedReal b);

}  // namespace radex
