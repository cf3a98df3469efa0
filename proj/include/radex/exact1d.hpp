#pragma once

// One-dimensional reference computations: closed-form radial epiderivatives of
// piecewise quadratics, a dense brute-force scan for arbitrary 1D oracles, and
// the global line search used by the optimizer.

#include <cstddef>
#include <functional>

#include "radex/extended_real.hpp"
#include "radex/func_model.hpp"
#include "radex/piecewise.hpp"

namespace radex {

/// Where the infimum over t > 0 was found.
enum class InfimumAt { Step, ZeroLimit, InfinityLimit };

struct ExactRadial {
  ExtendedReal value;
  /// Attaining step (0 for the t -> 0 limit, +inf for t -> infinity).
  double t_star = 0.0;
  InfimumAt where = InfimumAt::Step;
};

/// inf over t > 0 of (f(x̄+th) - f(x̄))/t, exactly, from the piece polynomials.
/// On each piece the quotient is α·t + β + γ/t; the candidates are the piece's
/// boundary steps (one-sided limits), the interior stationary point, and the
/// limits t -> 0 and t -> infinity. Throws InvalidArgument for h = 0.
ExactRadial exact_radial_analysis(const PiecewiseFn1D& pw, double xbar, double h);
ExtendedReal exact_radial_epiderivative(const PiecewiseFn1D& pw, double xbar, double h);

struct BruteForceOptions {
  std::size_t t_points = 1'000'000;
  double t_lo = 1e-8;
  double t_hi = 1e8;
  int refine_rounds = 3;
  std::size_t refine_points = 1000;
};

/// Minimum of the quotient over a dense log grid in t with local refinement
/// and a thin shell of perturbed directions at the minimizer. A minimum pinned
/// at either end of the grid whose quotient grows like 1/t (a downward jump at
/// x̄) or like t (a downward parabola) is reported as MinusInfinity.
ExtendedReal bruteforce_radial_epiderivative(const FunctionOracle& oracle, double xbar, double h,
                                             const BruteForceOptions& opts = {});

struct LineMin {
  double t_star = 0.0;
  ExtendedReal value;
  /// The best point is t_max itself.
  bool at_boundary = false;
  /// φ decreased along the whole tail of the grid up to t_max.
  bool monotone_to_boundary = false;
};

/// Best point of a uniform + log hybrid grid on (0, t_max] after refinement.
/// Ties go to the smallest t.
LineMin global_min_1d(const std::function<ExtendedReal(double)>& phi, double t_max,
                      std::size_t grid_size = 2000, int refine_rounds = 4);

}  // namespace radex
