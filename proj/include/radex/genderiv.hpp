#pragma once

// Numeric estimators for four generalized derivatives of a black-box oracle:
//
//   directional    f'(x;h)  = lim_{t↓0} q(t,h)
//   Clarke         f°(x;h)  = limsup_{y→x, t↓0} (f(y+th) - f(y)) / t
//   subderivative  df(x;h)  = liminf_{t↓0, u→h} q(t,u)
//   radial epi     f^r(x;h) = inf_{t>0} liminf_{u→h} q(t,u)
//
// with q(t,u) = (f(x+tu) - f(x)) / t. Limits in t and u are realized by a
// log-spaced t grid and a ladder of shrinking radii with deterministic
// low-discrepancy perturbations; every number reported is reproducible.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "radex/extended_real.hpp"
#include "radex/func_model.hpp"
#include "radex/point.hpp"

namespace radex {

enum class DerivativeKind { Directional, Clarke, Subderivative, RadialEpi };
enum class EstimateStatus { Converged, NotConvergent, UnboundedBelow, UnboundedAbove };

std::string to_string(DerivativeKind k);
std::string to_string(EstimateStatus s);
/// Accepts "directional", "clarke", "subderivative", "radial" (and a few aliases).
DerivativeKind parse_kind(const std::string& name);

struct SamplingSchedule {
  double t_min = 1e-6;
  double t_max = 1e6;
  int points_per_decade = 20;
  /// Strictly decreasing positive radii δ0 > δ1 > ... > δK.
  std::vector<double> shrink_ladder = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  /// Perturbation points per shell (m).
  std::size_t perturbations_per_shell = 16;
  int refine_rounds = 4;
  /// Relative-or-absolute tolerance: tol·max(1, |v|).
  double tol = 1e-3;
  /// M∞: magnitudes beyond this are infinite.
  double divergence_threshold = 1e9;
  /// Clarke and subderivative stages sample t in (δ·inner_t_ratio, δ].
  double inner_t_ratio = 1e-9;
  /// Unit directions for sweeps; empty means the default grid for the dimension.
  std::vector<std::vector<double>> direction_grid;

  /// Throws InvalidArgument when an invariant is violated.
  void validate() const;
  double tolerance_for(double v) const;
  double tolerance_for(ExtendedReal v) const;
};

/// One stage of a limit process: a shell radius δ (ladder stages) or a step t
/// (directional tail, radial grid).
struct StageRecord {
  double param = 0.0;
  /// Extremum over this stage's own samples.
  ExtendedReal own;
  /// Extremum over every sample lying in this stage's set, which contains the
  /// sets of all later stages. Monotone along the ladder by construction.
  ExtendedReal cumulative;
};

struct DerivativeEstimate {
  DerivativeKind kind = DerivativeKind::RadialEpi;
  ExtendedReal value;
  EstimateStatus status = EstimateStatus::Converged;
  std::vector<StageRecord> diagnostics;
  /// Radial: the step t attaining the infimum (t_max when attained at infinity).
  double arg_t = 0.0;
  /// Radial: the infimum was a t→∞ or t→0 limit rather than a sampled step.
  bool limit_extrapolated = false;
  std::uint64_t evaluations_used = 0;
};

/// (f(x̄+tu) - f(x̄)) / t. Throws BasePointInfinite when f(x̄) is not finite.
ExtendedReal newton_quotient(const FunctionOracle& oracle, const Point& xbar, double t,
                             const Direction& u);

/// Liminf profile of u ↦ q(t,u) around h at a fixed t.
struct ShellProfile {
  ExtendedReal center;  // q(t,h)
  /// Per ladder radius: min over {h} ∪ m perturbations in the δ‖h‖-ball.
  std::vector<ExtendedReal> per_radius;
  /// per_radius.back(): the smallest-radius liminf estimate.
  ExtendedReal value;
  /// Estimate with the continuous part of the shell dip extrapolated away:
  /// min(center, linear extrapolation of the last two radii to δ = 0).
  ExtendedReal limit;
  std::uint64_t evaluations = 0;
};

ShellProfile liminf_shell(const FunctionOracle& oracle, const Point& xbar, const Direction& h,
                          double t, const std::vector<double>& ladder, std::size_t m);

DerivativeEstimate directional_derivative(const FunctionOracle& oracle, const Point& xbar,
                                          const Direction& h, const SamplingSchedule& s = {});
DerivativeEstimate radial_epiderivative(const FunctionOracle& oracle, const Point& xbar,
                                        const Direction& h, const SamplingSchedule& s = {});
DerivativeEstimate clarke_derivative(const FunctionOracle& oracle, const Point& xbar,
                                     const Direction& h, const SamplingSchedule& s = {});
DerivativeEstimate subderivative(const FunctionOracle& oracle, const Point& xbar,
                                 const Direction& h, const SamplingSchedule& s = {});

DerivativeEstimate estimate(DerivativeKind kind, const FunctionOracle& oracle, const Point& xbar,
                            const Direction& h, const SamplingSchedule& s = {});

struct SweepRow {
  Direction h;
  DerivativeKind kind;
  std::optional<DerivativeEstimate> estimate;
  /// Set when the estimator raised instead of returning.
  std::string error;
};

struct SweepTable {
  std::vector<SweepRow> rows;
};

/// Rows ordered by direction, then by kind in enum order.
SweepTable derivative_sweep(const FunctionOracle& oracle, const Point& xbar,
                            const std::vector<Direction>& directions,
                            const std::set<DerivativeKind>& kinds, const SamplingSchedule& s = {});

}  // namespace radex
