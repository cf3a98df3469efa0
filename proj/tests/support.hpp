#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "radex/func_model.hpp"
#include "radex/genderiv.hpp"

namespace radex::test {

// min over s > 0 of s·sin(1/s), from a dense numpy grid polished with scipy's
// Brent minimizer. Frozen; never recomputed by the code under test.
inline constexpr double kShellMinimum = -0.21723362821122169;
inline constexpr double kShellArgmin = 0.222548158;

// Hand-written branch evaluation of the nine registry functions.
inline double hand_eval(const std::string& name, double x) {
  if (name == "f1") return x < 1 ? -x + 3 : x;
  if (name == "f2") return x <= 1 ? -x + 3 : x;
  if (name == "f3") return x <= 0 ? 4 * std::abs(x + 1) : std::abs(x - 1) + 3;
  if (name == "f4") return x == 0 ? 0 : x * std::sin(1 / x);
  if (name == "f5") return x == 0 ? 0 : x * std::sin(std::log(std::abs(x)));
  if (name == "f6") return x == 0 ? 0 : x * x * std::sin(1 / x);
  if (name == "f7") {
    if (x == 0) return 0;
    const double s = std::sin(1 / x);
    return x * x * (s * s);
  }
  if (name == "f8") return x <= 0 ? x * x : -x + 1;
  if (name == "f9") return x <= 0 ? x * x : x + 1;
  return NAN;
}

inline const FunctionOracle& fn(const std::string& name) { return get_function(name); }

inline DerivativeEstimate radial(const std::string& f, double x, double h,
                                 const SamplingSchedule& s = {}) {
  return radial_epiderivative(fn(f), Point{x}, Direction{h}, s);
}

// Five probe points per registry function.
inline std::vector<double> probe_points(const std::string& f) {
  if (f == "f1" || f == "f2") return {-1.0, 0.0, 0.5, 1.0, 2.0};
  if (f == "f3") return {-2.0, -1.0, 0.0, 1.0, 2.0};
  if (f == "f8" || f == "f9") return {-1.0, -0.5, 0.0, 0.5, 2.0};
  return {-1.0, -0.3, 0.0, 0.4, 1.5};
}

inline std::vector<std::string> registry_names() {
  return {"f1", "f2", "f3", "f4", "f5", "f6", "f7", "f8", "f9"};
}

}  // namespace radex::test
