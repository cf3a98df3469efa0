#include "radex/genderiv.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "radex/errors.hpp"
#include "radex/sampling.hpp"

namespace radex {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Quotients below this step lose accuracy to rounding in f(x̄+tu) - f(x̄).
constexpr double kNoiseRelStep = 1e-8;
// Distance of the probes that set the rounding scale.
constexpr double kProbeRadius = 1e-6;
// Compass refinements per ladder stage.
constexpr std::size_t kRefineStarts = 3;
// Golden-section iterations in log t.
constexpr int kGoldenIters = 60;

// Evaluation context at a fixed base point.
class QuotientEval {
 public:
  QuotientEval(const FunctionOracle& oracle, const Point& xbar)
      : oracle_(oracle), xbar_(xbar) {
    require_dim(oracle.dimension(), xbar.dim());
    ExtendedReal f0 = oracle(xbar);
    ++evals_;
    if (!f0.is_finite()) throw BasePointInfinite();
    fbar_ = f0.value();
    double scale = std::abs(fbar_);
    for (double v : xbar.coords) scale = std::max(scale, std::abs(v));
    // f may jump next to x̄; the rounding floor follows the nearby magnitude.
    std::vector<double> y = xbar.coords;
    for (std::size_t i = 0; i < y.size(); ++i) {
      for (double sgn : {-1.0, 1.0}) {
        y[i] = xbar[i] + sgn * kProbeRadius;
        ExtendedReal fy = f(y);
        if (fy.is_finite()) scale = std::max(scale, std::abs(fy.value()));
      }
      y[i] = xbar[i];
    }
    noise_floor_ = kNoiseRelStep * scale;
  }

  double fbar() const { return fbar_; }
  double noise_floor() const { return noise_floor_; }
  std::uint64_t evals() const { return evals_; }
  const Point& xbar() const { return xbar_; }

  ExtendedReal f(std::span<const double> y) {
    ++evals_;
    return oracle_(y);
  }

  // (f(base + t·u) - fbase) / t as a double (+inf allowed).
  double quotient_from(std::span<const double> base, double fbase, double t,
                       std::span<const double> u) {
    step_into(base, t, u, scratch_);
    ExtendedReal v = f(scratch_);
    return (v.raw() - fbase) / t;
  }

  double q(double t, std::span<const double> u) { return quotient_from(xbar_.span(), fbar_, t, u); }

 private:
  const FunctionOracle& oracle_;
  const Point& xbar_;
  double fbar_ = 0.0;
  double noise_floor_ = 0.0;
  std::uint64_t evals_ = 0;
  std::vector<double> scratch_;
};

ExtendedReal ext(double v) { return ExtendedReal(v); }

double tol_for(const SamplingSchedule& s, double v) {
  return s.tol * std::max(1.0, std::isfinite(v) ? std::abs(v) : 1.0);
}

// Power-law divergence of |v| as the limit parameter p shrinks: |v| ∝ p^-e with
// e >= 0.25, monotone, same sign, and already large.
bool diverges(std::span<const double> params, std::span<const double> values, double threshold) {
  if (values.size() < 3) return false;
  const double big = std::sqrt(threshold);
  const double first = values.front(), last = values.back();
  if (!std::isfinite(first) || !std::isfinite(last)) return false;
  if (first == 0.0 || (first > 0) != (last > 0)) return false;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(std::abs(values[i]) > std::abs(values[i - 1]))) return false;
    if ((values[i] > 0) != (last > 0)) return false;
  }
  if (std::abs(last) < big) return false;
  double span = std::log(params.front() / params.back());
  if (!(span > 0)) return false;
  return std::log(std::abs(last) / std::abs(first)) / span >= 0.25;
}

EstimateStatus unbounded_status(double v) {
  return v < 0 ? EstimateStatus::UnboundedBelow : EstimateStatus::UnboundedAbove;
}

ExtendedReal infinite_value(EstimateStatus s) {
  return s == EstimateStatus::UnboundedBelow ? ExtendedReal::minus_infinity()
                                             : ExtendedReal::plus_infinity();
}

// Compass (pattern) search minimizing fn over z; fn returns +inf outside the
// feasible set. Each coordinate step doubles on success and halves on failure.
// Deterministic; stops when every step is below initial·shrink_to.
double compass_minimize(const std::function<double(std::span<const double>)>& fn,
                        std::vector<double>& z, double fz, std::vector<double> steps,
                        double shrink_to, int max_iters) {
  const std::vector<double> initial = steps;
  std::vector<double> trial(z.size());
  for (int it = 0; it < max_iters; ++it) {
    bool all_small = true;
    for (std::size_t i = 0; i < z.size(); ++i) {
      bool moved = false;
      for (double sign : {1.0, -1.0}) {
        trial = z;
        trial[i] += sign * steps[i];
        const double v = fn(trial);
        if (v < fz) {
          fz = v;
          z = trial;
          moved = true;
          break;
        }
      }
      steps[i] = moved ? std::min(steps[i] * 2.0, initial[i] * 4.0) : steps[i] * 0.5;
      if (steps[i] > initial[i] * shrink_to) all_small = false;
    }
    if (all_small) break;
  }
  return fz;
}

// Golden-section minimization of fn on [a, b] (already a bracket in log t).
std::pair<double, double> golden_minimize(const std::function<double(double)>& fn, double a,
                                          double b, int iters) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = fn(c), fd = fn(d);
  double best_x = fc <= fd ? c : d, best_f = std::min(fc, fd);
  for (int i = 0; i < iters && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = fn(c);
      if (fc < best_f) best_f = fc, best_x = c;
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = fn(d);
      if (fd < best_f) best_f = fd, best_x = d;
    }
  }
  return {best_x, best_f};
}

std::vector<std::vector<double>> scaled_offsets(std::string_view tag, const Point& xbar,
                                                const Direction& h, std::size_t m) {
  return sampling::unit_ball_offsets(h.dim(), m, sampling::seed_for(tag, xbar.span(), h.span()));
}

// Shell minima of q(t,·) around h for each radius, sharing one offset set.
ShellProfile shell_profile(QuotientEval& ev, const Direction& h, double t,
                           const std::vector<double>& radii,
                           const std::vector<std::vector<double>>& offsets) {
  ShellProfile p;
  const std::uint64_t before = ev.evals();
  const double hn = norm(h.span());
  const double center = ev.q(t, h.span());
  p.center = ext(center);
  std::vector<double> u(h.dim());
  for (double delta : radii) {
    double mn = center;
    for (const auto& o : offsets) {
      for (std::size_t i = 0; i < u.size(); ++i) u[i] = h[i] + delta * hn * o[i];
      mn = std::min(mn, ev.q(t, u));
    }
    p.per_radius.push_back(ext(mn));
  }
  p.value = p.per_radius.back();
  double lim = p.value.raw();
  if (radii.size() >= 2) {
    const double mk = p.per_radius.back().raw();
    const double mk1 = p.per_radius[p.per_radius.size() - 2].raw();
    const double dk = radii.back(), dk1 = radii[radii.size() - 2];
    if (std::isfinite(mk) && std::isfinite(mk1) && mk1 <= mk)
      lim = mk + (mk - mk1) * dk / (dk1 - dk);
  }
  p.limit = ext(std::min(center, lim));
  p.evaluations = ev.evals() - before;
  return p;
}

// Status of a ladder of own-sample extrema (largest radius first).
EstimateStatus ladder_status(const SamplingSchedule& s, const std::vector<StageRecord>& stages) {
  const double last = stages.back().own.raw();
  if (std::isinf(last)) return unbounded_status(last);
  if (std::abs(last) > s.divergence_threshold) return unbounded_status(last);
  std::vector<double> params, values;
  for (const auto& st : stages) {
    params.push_back(st.param);
    values.push_back(st.own.raw());
  }
  const std::size_t tail = std::min<std::size_t>(3, values.size());
  if (diverges(std::span(params).last(tail), std::span(values).last(tail),
               s.divergence_threshold))
    return unbounded_status(last);
  if (stages.size() >= 2) {
    const double prev = stages[stages.size() - 2].own.raw();
    if (std::isfinite(prev) && std::abs(prev - last) <= tol_for(s, last))
      return EstimateStatus::Converged;
  }
  return EstimateStatus::NotConvergent;
}

// Shared driver for the Clarke (sup) and subderivative (inf) ladders.
// sample(δ, record) evaluates one stage; record(v) updates its extremum.
struct LadderSpec {
  bool maximize;
};

std::vector<double> inner_t_grid(const SamplingSchedule& s, double delta, double noise_floor) {
  double lo = std::max(delta * s.inner_t_ratio, noise_floor);
  if (!(lo < delta)) lo = delta * 1e-2;
  return sampling::log_grid(lo, delta, s.points_per_decade);
}

}  // namespace

std::string to_string(DerivativeKind k) {
  switch (k) {
    case DerivativeKind::Directional: return "directional";
    case DerivativeKind::Clarke: return "clarke";
    case DerivativeKind::Subderivative: return "subderivative";
    case DerivativeKind::RadialEpi: return "radial";
  }
  return "?";
}

std::string to_string(EstimateStatus s) {
  switch (s) {
    case EstimateStatus::Converged: return "Converged";
    case EstimateStatus::NotConvergent: return "NotConvergent";
    case EstimateStatus::UnboundedBelow: return "UnboundedBelow";
    case EstimateStatus::UnboundedAbove: return "UnboundedAbove";
  }
  return "?";
}

DerivativeKind parse_kind(const std::string& name) {
  if (name == "directional" || name == "dir") return DerivativeKind::Directional;
  if (name == "clarke") return DerivativeKind::Clarke;
  if (name == "subderivative" || name == "subder") return DerivativeKind::Subderivative;
  if (name == "radial" || name == "radial-epi" || name == "radialepi")
    return DerivativeKind::RadialEpi;
  throw InvalidArgument("unknown derivative kind: " + name);
}

void SamplingSchedule::validate() const {
  if (!(t_min > 0)) throw InvalidArgument("t_min must be > 0");
  if (!(t_max >= t_min)) throw InvalidArgument("t_max must be >= t_min");
  if (points_per_decade < 1) throw InvalidArgument("points_per_decade must be >= 1");
  if (shrink_ladder.empty()) throw InvalidArgument("shrink ladder is empty");
  for (std::size_t i = 0; i < shrink_ladder.size(); ++i) {
    if (!(shrink_ladder[i] > 0)) throw InvalidArgument("ladder radii must be > 0");
    if (i > 0 && !(shrink_ladder[i] < shrink_ladder[i - 1]))
      throw InvalidArgument("ladder radii must strictly decrease");
  }
  if (perturbations_per_shell < 1) throw InvalidArgument("perturbations_per_shell must be >= 1");
  if (refine_rounds < 0) throw InvalidArgument("refine_rounds must be >= 0");
  if (!(tol > 0)) throw InvalidArgument("tol must be > 0");
  if (!(divergence_threshold > 1)) throw InvalidArgument("divergence threshold must be > 1");
  if (!(inner_t_ratio > 0 && inner_t_ratio < 1))
    throw InvalidArgument("inner_t_ratio must lie in (0, 1)");
}

double SamplingSchedule::tolerance_for(double v) const { return tol_for(*this, v); }
double SamplingSchedule::tolerance_for(ExtendedReal v) const { return tol_for(*this, v.raw()); }

ExtendedReal newton_quotient(const FunctionOracle& oracle, const Point& xbar, double t,
                             const Direction& u) {
  if (!(t > 0)) throw InvalidArgument("t must be > 0");
  require_dim(xbar.dim(), u.dim());
  QuotientEval ev(oracle, xbar);
  return ext(ev.q(t, u.span()));
}

ShellProfile liminf_shell(const FunctionOracle& oracle, const Point& xbar, const Direction& h,
                          double t, const std::vector<double>& ladder, std::size_t m) {
  if (!(t > 0)) throw InvalidArgument("t must be > 0");
  if (ladder.empty() || m < 1) throw InvalidArgument("need a nonempty ladder and m >= 1");
  require_dim(xbar.dim(), h.dim());
  QuotientEval ev(oracle, xbar);
  ShellProfile p = shell_profile(ev, h, t, ladder, scaled_offsets("liminf", xbar, h, m));
  p.evaluations = ev.evals();
  return p;
}

// h = 0. The directional and Clarke quotients vanish identically. The radial
// epiderivative and the subderivative are lsc and positively homogeneous, so
// they are -inf at 0 as soon as they are -inf along some ±e_i, and 0 otherwise.
static DerivativeEstimate zero_direction(DerivativeKind kind, const FunctionOracle& oracle,
                                  const Point& xbar, const SamplingSchedule& s) {
  DerivativeEstimate est;
  est.kind = kind;
  est.value = ExtendedReal(0.0);
  if (!oracle(xbar).is_finite()) throw BasePointInfinite();
  if (kind == DerivativeKind::Directional || kind == DerivativeKind::Clarke) return est;
  for (auto& e : sampling::direction_grid(xbar.dim(), 0)) {
    const DerivativeEstimate d = estimate(kind, oracle, xbar, Direction(std::move(e)), s);
    est.evaluations_used += d.evaluations_used;
    if (d.value.is_minus_infinity()) {
      est.value = d.value;
      est.status = EstimateStatus::UnboundedBelow;
      break;
    }
  }
  return est;
}

DerivativeEstimate directional_derivative(const FunctionOracle& oracle, const Point& xbar,
                                          const Direction& h, const SamplingSchedule& s) {
  s.validate();
  require_dim(xbar.dim(), h.dim());
  if (h.is_zero()) return zero_direction(DerivativeKind::Directional, oracle, xbar, s);
  QuotientEval ev(oracle, xbar);
  DerivativeEstimate est;
  est.kind = DerivativeKind::Directional;

  // Smallest decade of the t grid, continued refine_rounds decades further down
  // (never below the rounding floor).
  double hi = std::min(s.t_max, s.t_min * 10.0);
  double lo = std::max(s.t_min * std::pow(10.0, -s.refine_rounds), ev.noise_floor());
  if (!(lo < hi)) lo = hi * 1e-2;
  std::vector<double> ts = sampling::log_grid(lo, hi, s.points_per_decade);
  std::reverse(ts.begin(), ts.end());
  std::vector<double> qs;
  for (double t : ts) {
    double q = ev.q(t, h.span());
    qs.push_back(q);
    est.diagnostics.push_back({t, ext(q), ext(q)});
  }
  est.evaluations_used = ev.evals();

  const double last = qs.back();
  const std::size_t tail = std::min<std::size_t>(5, qs.size());
  auto tail_q = std::span(qs).last(tail);
  if (std::isinf(last) || std::abs(last) > s.divergence_threshold) {
    est.status = unbounded_status(last);
    est.value = infinite_value(est.status);
    return est;
  }
  const std::size_t dtail = std::min<std::size_t>(qs.size(), s.points_per_decade + 1);
  if (diverges(std::span(ts).last(dtail), std::span(qs).last(dtail), s.divergence_threshold)) {
    est.status = unbounded_status(last);
    est.value = infinite_value(est.status);
    return est;
  }
  auto [mn, mx] = std::minmax_element(tail_q.begin(), tail_q.end());
  est.value = ext(last);
  est.status = (*mx - *mn <= tol_for(s, last)) ? EstimateStatus::Converged
                                               : EstimateStatus::NotConvergent;
  return est;
}

DerivativeEstimate radial_epiderivative(const FunctionOracle& oracle, const Point& xbar,
                                        const Direction& h, const SamplingSchedule& s) {
  s.validate();
  require_dim(xbar.dim(), h.dim());
  QuotientEval ev(oracle, xbar);
  DerivativeEstimate est;
  est.kind = DerivativeKind::RadialEpi;
  if (h.is_zero()) return zero_direction(DerivativeKind::RadialEpi, oracle, xbar, s);

  const auto offsets = scaled_offsets("radial", xbar, h, s.perturbations_per_shell);
  const auto& ladder = s.shrink_ladder;
  std::vector<double> last_two(ladder.end() - std::min<std::ptrdiff_t>(2, ladder.size()),
                               ladder.end());
  auto phi = [&](double t) { return shell_profile(ev, h, t, last_two, offsets).limit.raw(); };

  // Extension below t_min, down to the rounding floor, catches -inf limits at 0.
  std::vector<double> ext_ts;
  for (int j = 6; j >= 1; --j) {
    double t = s.t_min * std::pow(10.0, -j);
    if (t >= ev.noise_floor()) ext_ts.push_back(t);
  }
  std::vector<double> ts = ext_ts;
  const std::size_t n_ext = ext_ts.size();
  std::vector<double> grid = sampling::log_grid(s.t_min, s.t_max, s.points_per_decade);
  ts.insert(ts.end(), grid.begin(), grid.end());

  std::vector<double> vals(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    vals[i] = phi(ts[i]);
    est.diagnostics.push_back({ts[i], ext(vals[i]), ext(vals[i])});
  }
  // Running minimum from the large-t end gives the cumulative column.
  {
    double run = kInf;
    for (std::size_t i = ts.size(); i-- > 0;) {
      run = std::min(run, vals[i]);
      est.diagnostics[i].cumulative = ext(run);
    }
  }

  auto unbounded_below = [&] {
    est.status = EstimateStatus::UnboundedBelow;
    est.value = ExtendedReal::minus_infinity();
    est.evaluations_used = ev.evals();
    return est;
  };

  // t -> 0: values at t_min and below, ordered by decreasing t.
  {
    std::vector<double> ps, vs;
    const std::size_t top = std::min(ts.size() - 1, n_ext + s.points_per_decade);
    for (std::size_t i = top + 1; i-- > 0;) {
      ps.push_back(ts[i]);
      vs.push_back(vals[i]);
    }
    if (diverges(ps, vs, s.divergence_threshold) && vs.back() < 0) return unbounded_below();
  }
  // t -> ∞: last decade of the grid, parameter 1/t.
  {
    const std::size_t k = std::min<std::size_t>(grid.size(), s.points_per_decade + 1);
    std::vector<double> ps, vs;
    for (std::size_t i = ts.size() - k; i < ts.size(); ++i) {
      ps.push_back(1.0 / ts[i]);
      vs.push_back(vals[i]);
    }
    if (diverges(ps, vs, s.divergence_threshold) && vs.back() < 0) return unbounded_below();
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < vals.size(); ++i)
    if (vals[i] < vals[best]) best = i;  // first arg-min wins ties
  double best_t = ts[best], best_v = vals[best];
  if (best_v < -s.divergence_threshold) return unbounded_below();

  // Grid refinement then golden section, both in log t.
  if (std::isfinite(best_v)) {
    double a = std::log(ts[best > 0 ? best - 1 : 0]);
    double b = std::log(ts[std::min(best + 1, ts.size() - 1)]);
    const int sub = 16;
    for (int round = 0; round < s.refine_rounds && b > a; ++round) {
      double la = a, step = (b - a) / sub;
      for (int j = 0; j <= sub; ++j) {
        double t = std::exp(la + step * j);
        double v = phi(t);
        if (v < best_v) best_v = v, best_t = t;
      }
      double c = std::log(best_t);
      a = std::max(la, c - step);
      b = std::min(la + step * sub, c + step);
    }
    if (b > a) {
      auto [lt, v] = golden_minimize([&](double lt) { return phi(std::exp(lt)); }, a, b,
                                     kGoldenIters);
      if (v < best_v) best_v = v, best_t = std::exp(lt);
    }
  }

  // Infimum approached only in a limit: fit q = β + γ/t (t→∞) or q = β + α·t
  // (t→0) on the two outermost steps and accept β when a third step agrees.
  auto try_limit = [&](std::size_t i0, std::size_t i1, std::size_t i2, bool at_infinity) {
    const double t0 = ts[i0], t1 = ts[i1], t2 = ts[i2];
    const double q0 = vals[i0], q1 = vals[i1], q2 = vals[i2];
    if (!std::isfinite(q0) || !std::isfinite(q1) || !std::isfinite(q2)) return;
    double beta, pred;
    if (at_infinity) {
      beta = (t0 * q0 - t1 * q1) / (t0 - t1);
      double gamma = (q0 - beta) * t0;
      pred = beta + gamma / t2;
    } else {
      double alpha = (q0 - q1) / (t0 - t1);
      beta = q0 - alpha * t0;
      pred = beta + alpha * t2;
    }
    if (std::abs(pred - q2) > 1e-3 * tol_for(s, q2)) return;
    if (beta < best_v && beta >= best_v - tol_for(s, best_v)) {
      best_v = beta;
      est.limit_extrapolated = true;
    }
  };
  const std::size_t n = ts.size();
  if (n >= 3 && best_t >= ts[n - 1] * (1 - 1e-9)) try_limit(n - 1, n - 2, n - 3, true);
  if (n >= 3 && best_t <= ts[0] * (1 + 1e-9)) try_limit(0, 1, 2, false);

  // Full ladder at the arg-min step decides convergence. Near-ties on the grid
  // (largest t first) stand in when the arg-min sits in a sharp oscillation.
  auto ladder_agrees = [&](const ShellProfile& p) {
    if (ladder.size() < 2) return true;
    const double a = p.per_radius[ladder.size() - 2].raw();
    const double b = p.per_radius.back().raw();
    return std::abs(a - b) <= tol_for(s, b) || p.limit == p.center;
  };
  ShellProfile full = shell_profile(ev, h, best_t, ladder, offsets);
  bool converged = ladder_agrees(full);
  if (!converged && std::isfinite(best_v)) {
    int tried = 0;
    for (std::size_t i = ts.size(); i-- > 0 && tried < 4;) {
      if (!(vals[i] <= best_v + tol_for(s, best_v)) || ts[i] == best_t) continue;
      ++tried;
      if (ladder_agrees(shell_profile(ev, h, ts[i], ladder, offsets))) {
        converged = true;
        break;
      }
    }
  }
  for (std::size_t k = 0; k < ladder.size(); ++k)
    est.diagnostics.push_back({ladder[k], full.per_radius[k], full.per_radius[k]});

  est.arg_t = best_t;
  est.value = ext(best_v);
  est.evaluations_used = ev.evals();
  if (std::isinf(best_v)) {
    est.status = unbounded_status(best_v);
    return est;
  }
  est.status = converged ? EstimateStatus::Converged : EstimateStatus::NotConvergent;
  return est;
}

namespace {

// Shared ladder driver: per stage, extremum of a two-block search space
// (base offsets × t grid) followed by compass refinement.
DerivativeEstimate ladder_estimate(DerivativeKind kind, const FunctionOracle& oracle,
                                   const Point& xbar, const Direction& h,
                                   const SamplingSchedule& s) {
  s.validate();
  require_dim(xbar.dim(), h.dim());
  if (h.is_zero()) return zero_direction(kind, oracle, xbar, s);
  QuotientEval ev(oracle, xbar);
  const bool clarke = kind == DerivativeKind::Clarke;
  const double sign = clarke ? -1.0 : 1.0;  // minimize sign·q
  const std::size_t n = h.dim();
  const double hn = norm(h.span());
  const auto offsets = scaled_offsets(clarke ? "clarke" : "subderivative", xbar, h,
                                      s.perturbations_per_shell * 2);

  DerivativeEstimate est;
  est.kind = kind;
  std::vector<double> y(n), u(n);

  // Objective in z = (offset coordinates in the unit ball, log t).
  auto objective = [&](std::span<const double> z, double delta, double t_lo) -> double {
    double r2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) r2 += z[i] * z[i];
    const double t = std::exp(z[n]);
    if (r2 > 1.0 || t > delta || t < t_lo) return kInf;
    if (clarke) {
      for (std::size_t i = 0; i < n; ++i) y[i] = xbar[i] + delta * z[i];
      ExtendedReal fy = ev.f(y);
      if (!fy.is_finite()) return kInf;
      return sign * ev.quotient_from(y, fy.value(), t, h.span());
    }
    for (std::size_t i = 0; i < n; ++i) u[i] = h[i] + delta * hn * z[i];
    return sign * ev.q(t, u);
  };

  const double big = std::sqrt(s.divergence_threshold);
  bool pinned_large = false;
  for (double delta : s.shrink_ladder) {
    const std::vector<double> ts = inner_t_grid(s, delta, ev.noise_floor());
    const double t_lo = ts.front();
    // Best (sign-adjusted) sample per base offset, then compass refinement
    // from the few most promising ones.
    std::vector<std::pair<double, std::vector<double>>> starts;
    std::vector<double> z(n + 1);
    auto consider = [&](std::span<const double> o) {
      std::copy(o.begin(), o.end(), z.begin());
      double fy = 0.0;
      if (clarke) {
        for (std::size_t i = 0; i < n; ++i) y[i] = xbar[i] + delta * o[i];
        ExtendedReal v = ev.f(y);
        if (!v.is_finite()) return;
        fy = v.value();
      } else {
        for (std::size_t i = 0; i < n; ++i) u[i] = h[i] + delta * hn * o[i];
      }
      const std::vector<double> base = clarke ? y : u;
      double local = kInf;
      for (double t : ts) {
        const double v = clarke ? sign * ev.quotient_from(base, fy, t, h.span())
                                : ev.q(t, base);
        if (v < local) {
          local = v;
          z[n] = std::log(t);
        }
      }
      if (local < kInf) starts.emplace_back(local, z);
    };
    consider(std::vector<double>(n, 0.0));
    for (const auto& o : offsets) consider(o);

    std::stable_sort(starts.begin(), starts.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    double best = kInf;
    std::vector<double> best_z(n + 1, 0.0);
    std::vector<double> steps(n, 2.0 / std::max<double>(1.0, std::pow(offsets.size(), 1.0 / n)));
    steps.push_back(std::log(10.0) / s.points_per_decade);
    for (std::size_t k = 0; k < std::min<std::size_t>(kRefineStarts, starts.size()); ++k) {
      std::vector<double> zk = starts[k].second;
      double v = starts[k].first;
      if (std::isfinite(v))
        v = compass_minimize(
            [&](std::span<const double> zz) { return objective(zz, delta, t_lo); }, zk, v, steps,
            1e-9, 400);
      if (v < best) {
        best = v;
        best_z = zk;
      }
    }
    const double v = sign * best;
    est.diagnostics.push_back({delta, ext(std::isnan(v) ? kInf : v), ext(0.0)});
    // An extremum pressed against the smallest admissible step keeps growing
    // as t shrinks; large values there are read as divergence.
    pinned_large = std::isfinite(v) && std::abs(v) >= big &&
                   best_z[n] <= std::log(t_lo) + std::log(10.0) / s.points_per_decade;
  }

  // Cumulative extremum: stage k's set contains every later stage's set.
  double run = clarke ? -kInf : kInf;
  for (std::size_t k = est.diagnostics.size(); k-- > 0;) {
    double v = est.diagnostics[k].own.raw();
    run = clarke ? std::max(run, v) : std::min(run, v);
    est.diagnostics[k].cumulative = ext(run);
  }

  est.evaluations_used = ev.evals();
  est.status = pinned_large ? unbounded_status(est.diagnostics.back().own.raw())
                            : ladder_status(s, est.diagnostics);
  if (est.status == EstimateStatus::UnboundedAbove || est.status == EstimateStatus::UnboundedBelow)
    est.value = infinite_value(est.status);
  else
    est.value = est.diagnostics.back().cumulative;
  return est;
}

}  // namespace

DerivativeEstimate clarke_derivative(const FunctionOracle& oracle, const Point& xbar,
                                     const Direction& h, const SamplingSchedule& s) {
  return ladder_estimate(DerivativeKind::Clarke, oracle, xbar, h, s);
}

DerivativeEstimate subderivative(const FunctionOracle& oracle, const Point& xbar,
                                 const Direction& h, const SamplingSchedule& s) {
  return ladder_estimate(DerivativeKind::Subderivative, oracle, xbar, h, s);
}

DerivativeEstimate estimate(DerivativeKind kind, const FunctionOracle& oracle, const Point& xbar,
                            const Direction& h, const SamplingSchedule& s) {
  switch (kind) {
    case DerivativeKind::Directional: return directional_derivative(oracle, xbar, h, s);
    case DerivativeKind::Clarke: return clarke_derivative(oracle, xbar, h, s);
    case DerivativeKind::Subderivative: return subderivative(oracle, xbar, h, s);
    case DerivativeKind::RadialEpi: return radial_epiderivative(oracle, xbar, h, s);
  }
  throw InvalidArgument("unknown derivative kind");
}

SweepTable derivative_sweep(const FunctionOracle& oracle, const Point& xbar,
                            const std::vector<Direction>& directions,
                            const std::set<DerivativeKind>& kinds, const SamplingSchedule& s) {
  if (directions.empty()) throw InvalidArgument("sweep needs at least one direction");
  SweepTable table;
  for (const auto& h : directions) {
    for (DerivativeKind k : kinds) {
      SweepRow row{h, k, std::nullopt, {}};
      try {
        row.estimate = estimate(k, oracle, xbar, h, s);
      } catch (const Error& e) {
        row.error = e.what();
      }
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

}  // namespace radex
