#pragma once

// The derivative chain f^r <= df <= f' <= f° on a direction grid, and the
// support conditions under which parts of the chain collapse to equalities.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "radex/func_model.hpp"
#include "radex/genderiv.hpp"
#include "radex/point.hpp"

namespace radex {

enum class EqualityFlag { REqD, DEqPrime, PrimeEqCircle };
enum class ConditionKind { ClarkeSupport, DirDerSupport, SubderSupport };

std::string to_string(EqualityFlag f);
std::string to_string(ConditionKind k);

struct ChainRecord {
  Direction h;
  DerivativeEstimate radial, subder, directional, clarke;
  /// Equalities that hold in this direction (both sides Converged and finite).
  std::set<EqualityFlag> equal;
  /// Equalities that could be compared in this direction.
  std::set<EqualityFlag> comparable;
  bool ordering_ok = true;
};

struct ChainReport {
  std::vector<ChainRecord> records;
  bool ordering_ok = true;
  /// A flag is set when it holds in every comparable direction and at least
  /// one direction was comparable.
  std::set<EqualityFlag> equality_flags;
  /// Flags with at least one comparable direction.
  std::set<EqualityFlag> comparable_flags;
};

struct ConditionVerdict {
  ConditionKind kind = ConditionKind::ClarkeSupport;
  bool holds = true;
  std::optional<Point> witness;
  /// Smallest normalized slack found (negative when violated).
  double worst_slack = 0.0;
  /// Directions skipped because the reference derivative was +inf there.
  std::size_t excluded_directions = 0;
  std::size_t sample_size = 0;
};

/// Default grid: {-1, +1} in 1D; ±e_i plus 32 sphere points in nD.
std::vector<Direction> default_direction_grid(std::size_t dim);

ChainReport chain_report(const FunctionOracle& oracle, const Point& xbar,
                         const std::vector<Direction>& grid, const SamplingSchedule& s = {});

/// Reference derivative per grid direction (unit-direction estimates).
struct ReferenceDerivative {
  std::vector<Direction> directions;
  std::vector<DerivativeEstimate> estimates;
};

struct SupportSampleSpec {
  /// Steps s along each direction: log grid in [s_min, box] plus a uniform
  /// grid in (0, near].
  double s_min = 1e-6;
  double box = 1e6;
  double near = 10.0;
  int points_per_decade = 10;
  std::size_t uniform_points = 400;
};

/// Tests f(x̄ + s·h) - f(x̄) >= s·D(x̄;h) - tol over the grid directions.
/// Throws ReferenceNotAvailable when D is NotConvergent in a grid direction.
ConditionVerdict check_support_condition(const FunctionOracle& oracle, const Point& xbar,
                                         ConditionKind kind, const ReferenceDerivative& ref,
                                         const SamplingSchedule& s = {},
                                         const SupportSampleSpec& spec = {});

/// The reference derivative a condition uses, taken from a chain report.
ReferenceDerivative reference_for(const ChainReport& chain, ConditionKind kind);

struct RegularityReport {
  ChainReport chain;
  std::vector<ConditionVerdict> verdicts;
  /// Conditions whose reference derivative was unavailable, with the reason.
  std::vector<std::pair<ConditionKind, std::string>> unavailable;
  /// Every holding condition agrees with the equalities it implies.
  bool consistent = true;
  std::vector<std::string> notes;
};

/// Equalities implied by a support condition that holds.
std::set<EqualityFlag> implied_flags(ConditionKind kind);

RegularityReport classify_regularity(const FunctionOracle& oracle, const Point& xbar,
                                     const SamplingSchedule& s = {},
                                     const std::vector<Direction>& grid = {});

}  // namespace radex
