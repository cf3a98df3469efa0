#include "radex/extended_real.hpp"

#include <cmath>
#include <cstdio>

#include "radex/errors.hpp"

namespace radex {

ExtendedReal::ExtendedReal(double v) : v_(v) {
  if (std::isnan(v)) throw EvaluationFault("value", "NaN is not an extended real");
}

double ExtendedReal::value() const {
  if (!is_finite()) throw Error("extended real is infinite: " + to_string());
  return v_;
}

std::string ExtendedReal::to_string() const {
  if (is_plus_infinity()) return "inf";
  if (is_minus_infinity()) return "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v_);
  return buf;
}

ExtendedReal sub(ExtendedReal a, ExtendedReal b) {
  double r = a.raw() - b.raw();
  if (std::isnan(r)) throw EvaluationFault("sub", "indeterminate inf - inf");
  return ExtendedReal(r);
}

ExtendedReal div_pos(ExtendedReal a, double t) {
  if (!(t > 0.0)) throw InvalidArgument("division by a non-positive step");
  return ExtendedReal(a.raw() / t);
}

ExtendedReal scale_nonneg(double lambda, ExtendedReal a) {
  if (lambda < 0.0) throw InvalidArgument("negative scale");
  if (lambda == 0.0) return ExtendedReal(0.0);
  return ExtendedReal(lambda * a.raw());
}

ExtendedReal min(ExtendedReal a, ExtendedReal b) { return b < a ? b : a; }
ExtendedReal max(ExtendedReal a, ExtendedReal b) { return b > a ? b : a; }

}  // namespace radex
