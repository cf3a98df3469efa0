#pragma once

#include <limits>
#include <vector>

namespace radex {

/// One piece of a 1D piecewise quadratic: a·x² + b·x + c on an interval whose
/// endpoints may be open or closed. Unbounded ends use ±infinity and are open.
struct Piece {
  double lo = -std::numeric_limits<double>::infinity();
  bool lo_closed = false;
  double hi = std::numeric_limits<double>::infinity();
  bool hi_closed = false;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  /// The piece's polynomial, evaluated anywhere (not only on its interval).
  double poly(double x) const {
    double r = c;
    if (b != 0.0) r = b * x + r;
    if (a != 0.0) r = a * x * x + r;
    return r;
  }
  bool contains(double x) const {
    bool above = lo_closed ? x >= lo : x > lo;
    bool below = hi_closed ? x <= hi : x < hi;
    return above && below;
  }
};

/// A function on R given by pieces that partition the line, with explicit
/// ownership of every breakpoint. This is what separates
///   f(x) = -x+3 (x < 1), x (x >= 1)   from   -x+3 (x <= 1), x (x > 1).
class PiecewiseFn1D {
 public:
  PiecewiseFn1D() = default;
  /// Throws PieceCoverError unless the pieces, in order, cover R without gaps
  /// or overlaps.
  explicit PiecewiseFn1D(std::vector<Piece> pieces);

  const std::vector<Piece>& pieces() const { return pieces_; }
  /// Index of the piece owning x.
  std::size_t locate(double x) const;
  double operator()(double x) const { return pieces_[locate(x)].poly(x); }

 private:
  std::vector<Piece> pieces_;
};

}  // namespace radex
