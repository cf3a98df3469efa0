#include "radex/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "radex/errors.hpp"
#include "radex/sampling.hpp"

namespace radex {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool usable(const DerivativeEstimate& e) {
  return e.status == EstimateStatus::Converged && e.value.is_finite();
}

// Estimates as extended reals for ordering; NotConvergent cells are skipped.
bool defined(const DerivativeEstimate& e) { return e.status != EstimateStatus::NotConvergent; }

double chained_tol(const SamplingSchedule& s, double a, double b) {
  return s.tol * std::max({1.0, std::isfinite(a) ? std::abs(a) : 0.0,
                           std::isfinite(b) ? std::abs(b) : 0.0});
}

bool leq(const SamplingSchedule& s, const DerivativeEstimate& a, const DerivativeEstimate& b) {
  if (!defined(a) || !defined(b)) return true;
  const double x = a.value.raw(), y = b.value.raw();
  if (x == -kInf || y == kInf) return true;
  if (x == kInf || y == -kInf) return false;
  return x <= y + chained_tol(s, x, y);
}

void compare(const SamplingSchedule& s, ChainRecord& r, EqualityFlag flag,
             const DerivativeEstimate& a, const DerivativeEstimate& b) {
  if (!usable(a) || !usable(b)) return;
  r.comparable.insert(flag);
  const double x = a.value.raw(), y = b.value.raw();
  if (std::abs(x - y) <= chained_tol(s, x, y)) r.equal.insert(flag);
}

}  // namespace

std::string to_string(EqualityFlag f) {
  switch (f) {
    case EqualityFlag::REqD: return "REqD";
    case EqualityFlag::DEqPrime: return "DEqPrime";
    case EqualityFlag::PrimeEqCircle: return "PrimeEqCircle";
  }
  return "?";
}

std::string to_string(ConditionKind k) {
  switch (k) {
    case ConditionKind::ClarkeSupport: return "ClarkeSupport";
    case ConditionKind::DirDerSupport: return "DirDerSupport";
    case ConditionKind::SubderSupport: return "SubderSupport";
  }
  return "?";
}

std::vector<Direction> default_direction_grid(std::size_t dim) {
  std::vector<Direction> out;
  for (auto& d : sampling::direction_grid(dim, dim == 1 ? 0 : 32)) out.emplace_back(std::move(d));
  return out;
}

ChainReport chain_report(const FunctionOracle& oracle, const Point& xbar,
                         const std::vector<Direction>& grid, const SamplingSchedule& s) {
  if (grid.empty()) throw InvalidArgument("direction grid is empty");
  ChainReport rep;
  rep.records.resize(grid.size());
  sampling::parallel_chunks(grid.size(), grid.size(), [&](std::size_t, std::size_t b,
                                                          std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      ChainRecord& r = rep.records[i];
      r.h = grid[i];
      r.radial = radial_epiderivative(oracle, xbar, grid[i], s);
      r.subder = subderivative(oracle, xbar, grid[i], s);
      r.directional = directional_derivative(oracle, xbar, grid[i], s);
      r.clarke = clarke_derivative(oracle, xbar, grid[i], s);
    }
  });

  std::set<EqualityFlag> violated;
  for (ChainRecord& r : rep.records) {
    r.ordering_ok = leq(s, r.radial, r.subder) && leq(s, r.subder, r.directional) &&
                    leq(s, r.directional, r.clarke) && leq(s, r.radial, r.clarke) &&
                    leq(s, r.subder, r.clarke);
    rep.ordering_ok = rep.ordering_ok && r.ordering_ok;
    compare(s, r, EqualityFlag::REqD, r.radial, r.subder);
    compare(s, r, EqualityFlag::DEqPrime, r.subder, r.directional);
    compare(s, r, EqualityFlag::PrimeEqCircle, r.directional, r.clarke);
    for (EqualityFlag f : r.comparable) {
      rep.comparable_flags.insert(f);
      if (!r.equal.count(f)) violated.insert(f);
    }
  }
  for (EqualityFlag f : rep.comparable_flags)
    if (!violated.count(f)) rep.equality_flags.insert(f);
  return rep;
}

ReferenceDerivative reference_for(const ChainReport& chain, ConditionKind kind) {
  ReferenceDerivative ref;
  for (const ChainRecord& r : chain.records) {
    ref.directions.push_back(r.h);
    switch (kind) {
      case ConditionKind::ClarkeSupport: ref.estimates.push_back(r.clarke); break;
      case ConditionKind::DirDerSupport: ref.estimates.push_back(r.directional); break;
      case ConditionKind::SubderSupport: ref.estimates.push_back(r.subder); break;
    }
  }
  return ref;
}

ConditionVerdict check_support_condition(const FunctionOracle& oracle, const Point& xbar,
                                         ConditionKind kind, const ReferenceDerivative& ref,
                                         const SamplingSchedule& s,
                                         const SupportSampleSpec& spec) {
  require_dim(oracle.dimension(), xbar.dim());
  if (ref.directions.size() != ref.estimates.size() || ref.directions.empty())
    throw InvalidArgument("reference derivative needs one estimate per direction");
  const ExtendedReal f0 = oracle(xbar);
  if (!f0.is_finite()) throw BasePointInfinite();
  const double fbar = f0.value();

  std::vector<double> steps = sampling::log_grid(spec.s_min, spec.box, spec.points_per_decade);
  for (std::size_t k = 1; k <= spec.uniform_points; ++k)
    steps.push_back(spec.near * static_cast<double>(k) / static_cast<double>(spec.uniform_points));
  std::sort(steps.begin(), steps.end());

  ConditionVerdict v;
  v.kind = kind;
  double worst = kInf;
  std::optional<Point> worst_x;
  for (std::size_t d = 0; d < ref.directions.size(); ++d) {
    const DerivativeEstimate& e = ref.estimates[d];
    if (e.status == EstimateStatus::NotConvergent)
      throw ReferenceNotAvailable(to_string(kind) + ": reference derivative did not converge");
    const double D = e.value.raw();
    if (D == kInf) {
      ++v.excluded_directions;
      continue;
    }
    if (D == -kInf) continue;
    const Direction& h = ref.directions[d];
    const double hn = norm(h.span());
    for (double t : steps) {
      const Point x = step(xbar, t, h.span());
      const ExtendedReal fx = oracle(x);
      ++v.sample_size;
      if (fx.is_plus_infinity()) continue;
      const double slack = fx.raw() - fbar - t * D;
      const double tol =
          s.tol * t * hn * std::max(1.0, std::abs(D)) + 1e-12 * std::max(1.0, std::abs(fbar));
      const double normalized = slack / tol;
      if (normalized < worst) {
        worst = normalized;
        worst_x = x;
      }
    }
  }
  v.worst_slack = std::isfinite(worst) ? worst : 0.0;
  v.holds = !(worst < -1.0);
  if (!v.holds) v.witness = worst_x;
  return v;
}

std::set<EqualityFlag> implied_flags(ConditionKind kind) {
  switch (kind) {
    case ConditionKind::ClarkeSupport:
      return {EqualityFlag::REqD, EqualityFlag::DEqPrime, EqualityFlag::PrimeEqCircle};
    case ConditionKind::DirDerSupport: return {EqualityFlag::REqD, EqualityFlag::DEqPrime};
    case ConditionKind::SubderSupport: return {EqualityFlag::REqD};
  }
  return {};
}

RegularityReport classify_regularity(const FunctionOracle& oracle, const Point& xbar,
                                     const SamplingSchedule& s,
                                     const std::vector<Direction>& grid) {
  RegularityReport rep;
  rep.chain = chain_report(oracle, xbar, grid.empty() ? default_direction_grid(xbar.dim()) : grid,
                           s);
  for (ConditionKind kind : {ConditionKind::ClarkeSupport, ConditionKind::DirDerSupport,
                             ConditionKind::SubderSupport}) {
    try {
      rep.verdicts.push_back(
          check_support_condition(oracle, xbar, kind, reference_for(rep.chain, kind), s));
    } catch (const ReferenceNotAvailable& e) {
      rep.unavailable.emplace_back(kind, e.what());
    }
  }
  for (const ConditionVerdict& v : rep.verdicts) {
    if (!v.holds) continue;
    for (EqualityFlag f : implied_flags(v.kind)) {
      if (rep.chain.comparable_flags.count(f) && !rep.chain.equality_flags.count(f)) {
        rep.consistent = false;
        rep.notes.push_back(to_string(v.kind) + " holds but " + to_string(f) + " is absent");
      }
    }
  }
  if (!rep.chain.ordering_ok) rep.notes.push_back("ordering chain violated beyond tolerance");
  return rep;
}

}  // namespace radex
