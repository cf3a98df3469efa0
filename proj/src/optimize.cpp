#include "radex/optimize.hpp"

#include <atomic>
#include <cmath>
#include <memory>

#include "radex/errors.hpp"
#include "radex/exact1d.hpp"
#include "radex/sampling.hpp"

namespace radex {
namespace {

// The oracle with an evaluation counter attached.
FunctionOracle counted(const FunctionOracle& f, std::shared_ptr<std::atomic<std::uint64_t>> n) {
  return FunctionOracle(f.label(), f.dimension(), [f, n](std::span<const double> x) {
    n->fetch_add(1, std::memory_order_relaxed);
    return f(x);
  });
}

}  // namespace

std::string to_string(DescentStatus s) {
  switch (s) {
    case DescentStatus::GlobalMinCertified: return "GlobalMinCertified";
    case DescentStatus::BudgetExhausted: return "BudgetExhausted";
    case DescentStatus::PossiblyUnbounded: return "PossiblyUnbounded";
  }
  return "?";
}

std::vector<Direction> descent_grid(std::size_t dim, std::size_t sphere_per_dim,
                                    std::uint64_t seed) {
  std::vector<Direction> out;
  for (auto& d : sampling::direction_grid(dim, dim == 1 ? 0 : sphere_per_dim * dim, seed))
    out.emplace_back(std::move(d));
  return out;
}

BestDirection best_descent_direction(const FunctionOracle& oracle, const Point& xbar,
                                     const std::vector<Direction>& grid,
                                     const SamplingSchedule& s) {
  if (grid.empty()) throw InvalidArgument("direction grid is empty");
  std::vector<DerivativeEstimate> est(grid.size());
  sampling::parallel_chunks(grid.size(), grid.size(),
                            [&](std::size_t, std::size_t b, std::size_t e) {
                              for (std::size_t i = b; i < e; ++i)
                                est[i] = radial_epiderivative(oracle, xbar, grid[i], s);
                            });
  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (est[i].value < est[best].value) best = i;
  return {grid[best], est[best].value, est[best]};
}

bool stationarity_check(const FunctionOracle& oracle, const Point& xbar,
                        const std::vector<Direction>& grid, const SamplingSchedule& s,
                        double descent_tol) {
  const BestDirection b = best_descent_direction(oracle, xbar, grid, s);
  return b.fr >= ExtendedReal(-descent_tol);
}

DescentTrace radial_descent(const FunctionOracle& oracle, const Point& x0,
                            const DescentParams& p) {
  require_dim(oracle.dimension(), x0.dim());
  if (!(p.descent_tol > 0)) throw InvalidArgument("descent_tol must be > 0");
  p.schedule.validate();
  auto counter = std::make_shared<std::atomic<std::uint64_t>>(0);
  const FunctionOracle f = counted(oracle, counter);

  const ExtendedReal f0 = f(x0);
  if (!f0.is_finite()) throw BasePointInfinite();
  const double t_max = p.t_max > 0 ? p.t_max : 1e4 * (1.0 + norm(x0.span()));

  DescentTrace trace;
  DescentIterate cur{x0, f0.value(), std::nullopt, 0.0, ExtendedReal(0.0)};
  bool densified = false;
  std::vector<Direction> grid = descent_grid(x0.dim(), p.sphere_directions_per_dim);

  auto finish = [&](DescentStatus st, std::string note) {
    trace.iterates.push_back(cur);
    trace.status = st;
    trace.note = std::move(note);
    trace.evaluations = counter->load();
    return trace;
  };

  for (int iter = 0; iter < p.max_iters; ++iter) {
    if (counter->load() > p.eval_budget) return finish(DescentStatus::BudgetExhausted, "evaluation budget");
    const BestDirection best = best_descent_direction(f, cur.x, grid, p.schedule);
    if (best.fr.is_minus_infinity())
      return finish(DescentStatus::PossiblyUnbounded, "radial epiderivative is -inf");

    if (best.fr >= ExtendedReal(-p.descent_tol)) {
      const MembershipVerdict cert = global_min_certificate(f, cur.x, p.certificate_sample);
      if (cert.holds) return finish(DescentStatus::GlobalMinCertified, "");
      if (!densified) {
        densified = true;
        grid = descent_grid(x0.dim(), 2 * p.sphere_directions_per_dim, 0x5eed ^ 0xd15e);
        --iter;
        continue;
      }
      return finish(DescentStatus::BudgetExhausted,
                    "no descent direction on the grid but the certificate fails");
    }

    const Direction h = best.h;
    const Point base = cur.x;
    auto phi = [&](double t) { return f(step(base, t, h.span())); };
    LineMin lm = global_min_1d(phi, t_max, p.line_grid, p.line_refine_rounds);
    if (lm.at_boundary) {
      const LineMin wider = global_min_1d(phi, t_max * p.t_max_growth, p.line_grid,
                                          p.line_refine_rounds);
      if (wider.at_boundary && lm.monotone_to_boundary && wider.monotone_to_boundary)
        return finish(DescentStatus::PossiblyUnbounded,
                      "line minimum stays at t_max after widening");
      lm = wider;
    }
    if (!lm.value.is_finite() || !(lm.value.value() < cur.fx))
      return finish(DescentStatus::BudgetExhausted, "line search found no decrease");

    cur.h = h;
    cur.t = lm.t_star;
    cur.fr = best.fr;
    trace.iterates.push_back(cur);
    cur = DescentIterate{step(base, lm.t_star, h.span()), lm.value.value(), std::nullopt, 0.0,
                         ExtendedReal(0.0)};
  }
  return finish(DescentStatus::BudgetExhausted, "iteration limit");
}

}  // namespace radex
