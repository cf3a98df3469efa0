#pragma once

// Global descent driven by the radial epiderivative: a direction h with
// f^r(x;h) < 0 decreases f somewhere along the ray x + t·h, even at a local
// minimum, so a global line search along it escapes.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "radex/extended_real.hpp"
#include "radex/func_model.hpp"
#include "radex/genderiv.hpp"
#include "radex/point.hpp"
#include "radex/weaksub.hpp"

namespace radex {

enum class DescentStatus { GlobalMinCertified, BudgetExhausted, PossiblyUnbounded };
std::string to_string(DescentStatus s);

struct DescentParams {
  /// Extra sphere directions per dimension in nD (1D always uses {-1, +1}).
  std::size_t sphere_directions_per_dim = 32;
  double descent_tol = 1e-4;
  /// <= 0 means 1e4·(1 + ‖x₀‖).
  double t_max = 0.0;
  int max_iters = 50;
  std::uint64_t eval_budget = 50'000'000;
  /// Line-search grid and refinement.
  std::size_t line_grid = 2000;
  int line_refine_rounds = 12;
  /// t_max growth factor when the line minimum sits on the boundary.
  double t_max_growth = 1e3;
  SampleSpec certificate_sample;
  SamplingSchedule schedule;
};

struct DescentIterate {
  Point x;
  double fx = 0.0;
  /// The step taken from this iterate (absent on the last one).
  std::optional<Direction> h;
  double t = 0.0;
  ExtendedReal fr;
};

struct DescentTrace {
  std::vector<DescentIterate> iterates;
  DescentStatus status = DescentStatus::BudgetExhausted;
  std::uint64_t evaluations = 0;
  std::string note;
  std::size_t steps() const { return iterates.empty() ? 0 : iterates.size() - 1; }
};

struct BestDirection {
  Direction h;
  ExtendedReal fr;
  DerivativeEstimate estimate;
};

/// Grid used by the optimizer: {-1,+1} in 1D; ±e_i plus extra sphere points in nD.
std::vector<Direction> descent_grid(std::size_t dim, std::size_t sphere_per_dim,
                                    std::uint64_t seed = 0x5eed);

/// Arg-min over the grid of the radial estimate; the first grid entry wins ties.
BestDirection best_descent_direction(const FunctionOracle& oracle, const Point& xbar,
                                     const std::vector<Direction>& grid,
                                     const SamplingSchedule& s = {});

/// min over the grid of f̂^r(x̄;h) >= -descent_tol.
bool stationarity_check(const FunctionOracle& oracle, const Point& xbar,
                        const std::vector<Direction>& grid, const SamplingSchedule& s = {},
                        double descent_tol = 1e-4);

DescentTrace radial_descent(const FunctionOracle& oracle, const Point& x0,
                            const DescentParams& params = {});

}  // namespace radex
