#pragma once

// Weak subgradients (v, c): pairs with
//   f(x) >= f(x̄) + <v, x - x̄> - c‖x - x̄‖   for all x.
// They are built from radial epiderivative values and checked by sampling.

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "radex/extended_real.hpp"
#include "radex/func_model.hpp"
#include "radex/genderiv.hpp"
#include "radex/piecewise.hpp"
#include "radex/point.hpp"

namespace radex {

enum class Provenance { ConstructedL2, ConstructedL1, UserSupplied };

struct WeakSubgradient {
  std::vector<double> v;
  double c = 0.0;
  NormKind norm_kind = NormKind::L2;
  Provenance provenance = Provenance::UserSupplied;
  /// Constructed pairs: the normalized direction and the f^r value used.
  std::vector<double> direction;
  double fr_value = 0.0;
  double epsilon = 0.0;
};

struct MembershipVerdict {
  bool holds = true;
  /// The sampled point with the most negative slack, when the check fails.
  std::optional<Point> witness;
  /// Smallest slack f(x) - f(x̄) - <v,x-x̄> + c‖x-x̄‖ over the sample.
  double margin = 0.0;
  std::size_t sample_size = 0;
};

/// f^r(x̄; ·) for a fixed base point.
using RadialFn = std::function<ExtendedReal(const Direction&)>;

/// Numeric f^r(x̄;·) through the radial estimator.
RadialFn numeric_radial(const FunctionOracle& oracle, const Point& xbar,
                        const SamplingSchedule& schedule = {});
/// Exact f^r(x̄;·) of a 1D piecewise quadratic.
RadialFn exact_radial(const PiecewiseFn1D& pw, double xbar);

struct CLadder {
  double c0 = 1.0;
  double factor = 2.0;
  double c_max = 1073741824.0;  // 2^30
  /// Sphere sample size per dimension (n >= 2; 1D uses exactly {-1, +1}).
  std::size_t sphere_points_per_dim = 64;
};

/// v = (c + f^r(x̄;h) - ε)·h with h scaled to ‖h‖₂ = 1 and c the first ladder
/// value for which <v,x> - c‖x‖₂ <= f^r(x̄;x) on the sphere sample.
WeakSubgradient construct_l2(const Point& xbar, const Direction& h, double eps,
                             const RadialFn& fr, const CLadder& ladder = {});
/// v = (c + f^r(x̄;h) - ε)·Sgn(h) with h scaled to ‖h‖₁ = 1, checked on the
/// ℓ1 sphere. Throws ZeroComponent when some h_i = 0.
WeakSubgradient construct_l1(const Point& xbar, const Direction& h, double eps,
                             const RadialFn& fr, const CLadder& ladder = {});

struct SampleSpec {
  std::size_t points = 10000;
  /// Half-width of the analysis box around x̄.
  double box = 1e6;
  /// Half-width of the densely sampled neighbourhood of x̄.
  double near = 10.0;
  std::uint64_t seed = 0x77a5;
};

MembershipVerdict verify_membership(const FunctionOracle& oracle, const Point& xbar,
                                    const WeakSubgradient& w, const SampleSpec& spec = {});
/// Membership of (0, 0): f(x) >= f(x̄) on the sample.
MembershipVerdict global_min_certificate(const FunctionOracle& oracle, const Point& xbar,
                                         const SampleSpec& spec = {});

/// [-c - fr_minus, c + fr_plus], or nullopt when empty.
std::optional<std::pair<double, double>> wsub_interval_1d(double fr_plus, double fr_minus,
                                                          double c);

}  // namespace radex
