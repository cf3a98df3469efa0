#include "radex/exact1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "radex/errors.hpp"
#include "radex/sampling.hpp"

namespace radex {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Candidates are evaluated in extended precision and rounded once at the end.
using Wide = long double;

struct Candidate {
  Wide value;
  Wide t;
  InfimumAt where;
};

// Quotient pieces for a unit direction s = ±1 from x̄.
struct RayPiece {
  Wide t_lo, t_hi;  // open or closed does not matter for an infimum
  Wide alpha, beta, gamma;
};

Wide wide_poly(const Piece& p, Wide x) {
  return static_cast<Wide>(p.a) * x * x + static_cast<Wide>(p.b) * x + static_cast<Wide>(p.c);
}

}  // namespace

ExactRadial exact_radial_analysis(const PiecewiseFn1D& pw, double xbar, double h) {
  if (h == 0.0) throw InvalidArgument("direction must be nonzero");
  if (!std::isfinite(xbar)) throw InvalidArgument("base point must be finite");
  if (!std::isfinite(pw(xbar))) throw BasePointInfinite();
  const Wide x0 = xbar;
  const Wide fbar = wide_poly(pw.pieces()[pw.locate(xbar)], x0);
  const Wide s = h > 0 ? 1.0L : -1.0L;

  std::vector<RayPiece> ray;
  for (const Piece& p : pw.pieces()) {
    // The piece's interval in t along x̄ + t·s.
    Wide t0 = s > 0 ? p.lo - x0 : x0 - p.hi;
    Wide t1 = s > 0 ? p.hi - x0 : x0 - p.lo;
    t0 = std::max(t0, 0.0L);
    if (!(t1 > 0) || t0 > t1) continue;
    if (t0 == t1 && t0 == 0.0L) continue;
    ray.push_back({t0, t1, static_cast<Wide>(p.a), (2.0L * p.a * x0 + p.b) * s,
                   wide_poly(p, x0) - fbar});
  }
  std::sort(ray.begin(), ray.end(), [](const RayPiece& a, const RayPiece& b) {
    return a.t_lo < b.t_lo;
  });

  std::vector<Candidate> cands;
  auto q = [](const RayPiece& r, Wide t) { return r.alpha * t + r.beta + r.gamma / t; };
  const Wide inf = kInf;
  for (const RayPiece& r : ray) {
    if (r.t_lo == 0.0) {
      if (r.gamma < 0) cands.push_back({-inf, 0.0L, InfimumAt::ZeroLimit});
      else if (r.gamma == 0) cands.push_back({r.beta, 0.0L, InfimumAt::ZeroLimit});
    } else {
      cands.push_back({q(r, r.t_lo), r.t_lo, InfimumAt::Step});
    }
    if (std::isinf(r.t_hi)) {
      if (r.alpha < 0) cands.push_back({-inf, inf, InfimumAt::InfinityLimit});
      else if (r.alpha == 0) cands.push_back({r.beta, inf, InfimumAt::InfinityLimit});
    } else {
      cands.push_back({q(r, r.t_hi), r.t_hi, InfimumAt::Step});
    }
    if (r.alpha > 0 && r.gamma > 0) {
      const Wide ts = std::sqrt(r.gamma / r.alpha);
      if (ts > r.t_lo && ts < r.t_hi)
        cands.push_back({r.beta + 2.0L * std::sqrt(r.alpha * r.gamma), ts, InfimumAt::Step});
    }
  }
  if (cands.empty()) throw PieceCoverError("no piece meets the ray");

  // Smallest value; among equal values the smallest step.
  Candidate best = cands.front();
  for (const Candidate& c : cands)
    if (c.value < best.value || (c.value == best.value && c.t < best.t)) best = c;

  // Homogeneity: the quotient for h is |h| times the quotient for sign(h), at
  // step t/|h|.
  const Wide scale = std::abs(static_cast<Wide>(h));
  const double value = static_cast<double>(best.value * scale);
  ExactRadial out;
  out.value = std::isinf(value) ? ExtendedReal(value) : ExtendedReal(value + 0.0);
  out.t_star = static_cast<double>(best.t / scale);
  out.where = best.where;
  return out;
}

ExtendedReal exact_radial_epiderivative(const PiecewiseFn1D& pw, double xbar, double h) {
  return exact_radial_analysis(pw, xbar, h).value;
}

ExtendedReal bruteforce_radial_epiderivative(const FunctionOracle& oracle, double xbar, double h,
                                             const BruteForceOptions& opts) {
  require_dim(1, oracle.dimension());
  if (h == 0.0) throw InvalidArgument("direction must be nonzero");
  if (!(opts.t_lo > 0 && opts.t_hi > opts.t_lo && opts.t_points >= 2))
    throw InvalidArgument("bad brute-force grid");
  const ExtendedReal f0 = oracle.at(xbar);
  if (!f0.is_finite()) throw BasePointInfinite();
  const double fbar = f0.value();
  auto q = [&](double t, double u) { return (oracle.at(xbar + t * u).raw() - fbar) / t; };

  const std::size_t n = opts.t_points;
  const double llo = std::log(opts.t_lo), lhi = std::log(opts.t_hi);
  auto t_at = [&](std::size_t i) {
    if (i == 0) return opts.t_lo;
    if (i == n - 1) return opts.t_hi;
    return std::exp(llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(n - 1));
  };

  const std::size_t chunks = 64;
  std::vector<std::pair<double, std::size_t>> local(chunks, {kInf, n});
  sampling::parallel_chunks(n, chunks, [&](std::size_t c, std::size_t b, std::size_t e) {
    double best = kInf;
    std::size_t arg = n;
    for (std::size_t i = b; i < e; ++i) {
      const double v = q(t_at(i), h);
      if (v < best) best = v, arg = i;
    }
    local[c] = {best, arg};
  });
  double best = kInf;
  std::size_t arg = n;
  for (const auto& [v, i] : local)
    if (v < best) best = v, arg = i;
  if (arg == n) return ExtendedReal::plus_infinity();

  // Minimum pinned at an end of the grid: test for a -inf limit.
  auto pinned_diverges = [&](double t1, double t2, double power) {
    const double a = q(t1, h) * std::pow(t1, power), b = q(t2, h) * std::pow(t2, power);
    return a < 0 && b < 0 && std::abs(a - b) <= 0.1 * std::abs(a) && std::abs(a) > 1e-6;
  };
  if (arg == 0 && pinned_diverges(opts.t_lo, opts.t_lo * 10, 1.0))
    return ExtendedReal::minus_infinity();
  if (arg == n - 1 && pinned_diverges(opts.t_hi, opts.t_hi / 10, -1.0))
    return ExtendedReal::minus_infinity();

  // Local refinement on shrinking uniform sub-grids in log t.
  double best_t = t_at(arg);
  double a = std::log(t_at(arg > 0 ? arg - 1 : 0));
  double b = std::log(t_at(std::min(arg + 1, n - 1)));
  for (int round = 0; round < opts.refine_rounds && b > a; ++round) {
    const double step = (b - a) / static_cast<double>(opts.refine_points);
    for (std::size_t j = 0; j <= opts.refine_points; ++j) {
      const double t = std::exp(a + step * static_cast<double>(j));
      const double v = q(t, h);
      if (v < best) best = v, best_t = t;
    }
    const double c = std::log(best_t);
    a = std::max(a, c - step);
    b = std::min(b, c + step);
  }
  // Thin shell of directions around h at the minimizer.
  for (double d : {1e-9, 1e-12})
    for (double s : {-1.0, -0.5, 0.5, 1.0}) best = std::min(best, q(best_t, h * (1.0 + d * s)));
  return ExtendedReal(best);
}

LineMin global_min_1d(const std::function<ExtendedReal(double)>& phi, double t_max,
                      std::size_t grid_size, int refine_rounds) {
  if (!(t_max > 0) || !std::isfinite(t_max)) throw InvalidArgument("t_max must be positive");
  if (grid_size < 2) throw InvalidArgument("grid_size must be >= 2");

  std::vector<double> ts;
  ts.reserve(2 * grid_size);
  for (std::size_t k = 1; k <= grid_size; ++k)
    ts.push_back(t_max * static_cast<double>(k) / static_cast<double>(grid_size));
  const double llo = std::log(t_max * 1e-9), lhi = std::log(t_max);
  for (std::size_t k = 0; k + 1 < grid_size; ++k)
    ts.push_back(std::exp(llo + (lhi - llo) * static_cast<double>(k) /
                                    static_cast<double>(grid_size - 1)));
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  std::vector<double> vals(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) vals[i] = phi(ts[i]).raw();
  std::size_t arg = 0;
  for (std::size_t i = 1; i < ts.size(); ++i)
    if (vals[i] < vals[arg]) arg = i;

  LineMin out;
  out.t_star = ts[arg];
  double best = vals[arg];

  if (std::isfinite(best)) {
    double a = ts[arg > 0 ? arg - 1 : 0];
    double b = ts[std::min(arg + 1, ts.size() - 1)];
    const int sub = 64;
    for (int round = 0; round < refine_rounds && b > a; ++round) {
      const double step = (b - a) / sub;
      const double base = a;
      for (int j = 0; j <= sub; ++j) {
        const double t = j == sub ? b : base + step * j;
        if (!(t > 0)) continue;
        const double v = phi(t).raw();
        if (v < best || (v == best && t < out.t_star)) best = v, out.t_star = t;
      }
      a = std::max(base, out.t_star - step);
      b = std::min(b, out.t_star + step);
    }
  }
  out.value = ExtendedReal(best);
  out.at_boundary = out.t_star >= t_max;

  // Strict decrease over the last tenth of the uniform grid.
  if (out.at_boundary) {
    bool mono = true;
    const std::size_t tail = std::max<std::size_t>(2, grid_size / 10);
    for (std::size_t k = grid_size - tail + 1; k <= grid_size && mono; ++k) {
      const double t1 = t_max * static_cast<double>(k - 1) / static_cast<double>(grid_size);
      const double t2 = t_max * static_cast<double>(k) / static_cast<double>(grid_size);
      mono = phi(t2).raw() < phi(t1).raw();
    }
    out.monotone_to_boundary = mono;
  }
  return out;
}

}  // namespace radex
