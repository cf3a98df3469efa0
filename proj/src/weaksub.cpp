#include "radex/weaksub.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "radex/errors.hpp"
#include "radex/exact1d.hpp"
#include "radex/sampling.hpp"

namespace radex {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRelTol = 1e-9;
constexpr double kAbsTol = 1e-12;

std::vector<std::vector<double>> sphere_sample(std::size_t n, std::span<const double> hhat,
                                               const CLadder& ladder, int norm) {
  auto pts = sampling::unit_sphere_points(n, ladder.sphere_points_per_dim * n,
                                          sampling::seed_for("sphere", {}, hhat), norm);
  pts.emplace_back(hhat.begin(), hhat.end());
  std::vector<double> neg(hhat.begin(), hhat.end());
  for (double& x : neg) x = -x;
  pts.push_back(std::move(neg));
  return pts;
}

// Smallest ladder c with <v_c, x> - c‖x‖ <= f^r(x) on every sample point,
// v_c = (c + r - ε)·dir.
double ladder_search(std::span<const double> dir, double r, double eps,
                     const std::vector<std::vector<double>>& pts,
                     const std::vector<ExtendedReal>& frs, NormKind kind, const CLadder& ladder) {
  for (double c = ladder.c0; c <= ladder.c_max; c *= ladder.factor) {
    const double s = c + r - eps;
    bool ok = true;
    for (std::size_t i = 0; i < pts.size() && ok; ++i) {
      if (frs[i].is_plus_infinity()) continue;
      const double g = s * dot(dir, pts[i]) - c * norm(pts[i], kind);
      const double f = frs[i].raw();
      ok = g <= f + kRelTol * std::max({1.0, std::abs(g), std::abs(f)});
    }
    if (ok) return c;
  }
  throw CBudgetExhausted(ladder.c_max);
}

WeakSubgradient construct(const Point& xbar, const Direction& h, double eps, const RadialFn& fr,
                          const CLadder& ladder, NormKind kind) {
  require_dim(xbar.dim(), h.dim());
  if (!(eps > 0) || !std::isfinite(eps)) throw InvalidArgument("epsilon must be > 0");
  if (!(ladder.c0 > 0 && ladder.factor > 1 && ladder.c_max >= ladder.c0))
    throw InvalidArgument("bad c ladder");
  if (h.is_zero()) throw InvalidArgument("direction must be nonzero");
  const std::size_t n = h.dim();
  if (kind == NormKind::L1)
    for (std::size_t i = 0; i < n; ++i)
      if (h[i] == 0.0) throw ZeroComponent(i);

  const double hn = norm(h.span(), kind);
  std::vector<double> hhat(n);
  for (std::size_t i = 0; i < n; ++i) hhat[i] = h[i] / hn;
  std::vector<double> dir = hhat;
  if (kind == NormKind::L1)
    for (double& d : dir) d = d > 0 ? 1.0 : -1.0;

  const auto pts = sphere_sample(n, hhat, ladder, kind == NormKind::L1 ? 1 : 2);
  std::vector<ExtendedReal> frs;
  frs.reserve(pts.size());
  for (const auto& p : pts) {
    ExtendedReal v = fr(Direction(p, kind));
    if (v.is_minus_infinity()) throw NotEpidifferentiable();
    frs.push_back(v);
  }
  const ExtendedReal r = fr(Direction(hhat, kind));
  if (!r.is_finite()) throw NotEpidifferentiable();

  // ℓ2: dir = ĥ. ℓ1: dir = Sgn(h), and <Sgn(h), ĥ> = ‖ĥ‖₁ = 1 gives the touch at ĥ.
  const double c = ladder_search(dir, r.value(), eps, pts, frs, kind, ladder);
  WeakSubgradient w;
  w.c = c;
  w.norm_kind = kind;
  w.provenance = kind == NormKind::L1 ? Provenance::ConstructedL1 : Provenance::ConstructedL2;
  w.direction = hhat;
  w.fr_value = r.value();
  w.epsilon = eps;
  w.v.resize(n);
  const double s = c + r.value() - eps;
  for (std::size_t i = 0; i < n; ++i) w.v[i] = s * dir[i];
  return w;
}

struct Sample {
  std::vector<std::vector<double>> xs;
};

Sample membership_sample(const Point& xbar, const SampleSpec& spec) {
  const std::size_t n = xbar.dim();
  Sample s;
  auto add = [&](std::span<const double> offset) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = xbar[i] + offset[i];
    s.xs.push_back(std::move(x));
  };
  const double scale = std::max(1.0, norm(xbar.span()));
  const double d_lo = 1e-9 * scale;
  if (n == 1) {
    const std::size_t per_side = spec.points * 2 / 5;
    const double llo = std::log(d_lo), lhi = std::log(spec.box);
    for (double sign : {-1.0, 1.0})
      for (std::size_t k = 0; k < per_side; ++k) {
        const double d = std::exp(llo + (lhi - llo) * static_cast<double>(k) /
                                            static_cast<double>(per_side - 1));
        const double o = sign * d;
        add(std::span<const double>(&o, 1));
      }
    const std::size_t uni = spec.points - 2 * per_side;
    for (std::size_t k = 0; k < uni; ++k) {
      const double o = -spec.near + 2.0 * spec.near * static_cast<double>(k) /
                                        static_cast<double>(std::max<std::size_t>(1, uni - 1));
      add(std::span<const double>(&o, 1));
    }
    return s;
  }
  // Rays along ±e_i, shells around x̄, uniform points in the near box.
  const std::size_t per_ray = std::max<std::size_t>(20, spec.points / (8 * n));
  std::vector<double> o(n);
  const double llo = std::log(d_lo), lhi = std::log(spec.box);
  for (std::size_t i = 0; i < n; ++i)
    for (double sign : {-1.0, 1.0})
      for (std::size_t k = 0; k < per_ray; ++k) {
        std::fill(o.begin(), o.end(), 0.0);
        o[i] = sign * std::exp(llo + (lhi - llo) * static_cast<double>(k) /
                                         static_cast<double>(per_ray - 1));
        add(o);
      }
  const std::size_t used = s.xs.size();
  const std::size_t rest = spec.points > used ? spec.points - used : 0;
  const std::size_t n_shell = rest / 2, n_box = rest - n_shell;
  const auto dirs = sampling::unit_sphere_points(n, std::max<std::size_t>(1, n_shell),
                                                 spec.seed ^ 0x5bd1e995, 2);
  for (std::size_t k = 0; k < n_shell; ++k) {
    const double rad = std::exp(llo + (lhi - llo) * static_cast<double>(k % 97) / 96.0);
    for (std::size_t i = 0; i < n; ++i) o[i] = rad * dirs[k % dirs.size()][i];
    add(o);
  }
  sampling::Kronecker kr(n, spec.seed);
  std::vector<double> u(n);
  for (std::size_t k = 0; k < n_box; ++k) {
    kr.point(k, u);
    for (std::size_t i = 0; i < n; ++i) o[i] = spec.near * (2.0 * u[i] - 1.0);
    add(o);
  }
  return s;
}

}  // namespace

RadialFn numeric_radial(const FunctionOracle& oracle, const Point& xbar,
                        const SamplingSchedule& schedule) {
  return [oracle, xbar, schedule](const Direction& h) {
    return radial_epiderivative(oracle, xbar, h, schedule).value;
  };
}

RadialFn exact_radial(const PiecewiseFn1D& pw, double xbar) {
  return [pw, xbar](const Direction& h) {
    require_dim(1, h.dim());
    if (h[0] == 0.0) return ExtendedReal(0.0);
    return exact_radial_epiderivative(pw, xbar, h[0]);
  };
}

WeakSubgradient construct_l2(const Point& xbar, const Direction& h, double eps,
                             const RadialFn& fr, const CLadder& ladder) {
  return construct(xbar, h, eps, fr, ladder, NormKind::L2);
}

WeakSubgradient construct_l1(const Point& xbar, const Direction& h, double eps,
                             const RadialFn& fr, const CLadder& ladder) {
  return construct(xbar, h, eps, fr, ladder, NormKind::L1);
}

MembershipVerdict verify_membership(const FunctionOracle& oracle, const Point& xbar,
                                    const WeakSubgradient& w, const SampleSpec& spec) {
  require_dim(oracle.dimension(), xbar.dim());
  require_dim(xbar.dim(), w.v.size());
  if (!(w.c >= 0)) throw InvalidArgument("c must be >= 0");
  const ExtendedReal f0 = oracle(xbar);
  if (!f0.is_finite()) throw BasePointInfinite();
  const double fbar = f0.value();
  const Sample sample = membership_sample(xbar, spec);
  const std::size_t m = sample.xs.size();
  const std::size_t n = xbar.dim();

  // Per chunk: (normalized violation, slack, index) of the worst point.
  struct Worst {
    double violation = -kInf;
    double slack = kInf;
    std::size_t index = 0;
  };
  const std::size_t chunks = 32;
  std::vector<Worst> local(chunks);
  sampling::parallel_chunks(m, chunks, [&](std::size_t c, std::size_t b, std::size_t e) {
    Worst worst;
    std::vector<double> d(n);
    for (std::size_t k = b; k < e; ++k) {
      const auto& x = sample.xs[k];
      const ExtendedReal fx = oracle(x);
      if (fx.is_plus_infinity()) continue;
      for (std::size_t i = 0; i < n; ++i) d[i] = x[i] - xbar[i];
      const double lin = dot(w.v, d);
      const double pen = w.c * norm(d, w.norm_kind);
      const double slack = fx.raw() - fbar - lin + pen;
      const double scale =
          kRelTol * (std::abs(fx.raw()) + std::abs(fbar) + std::abs(lin) + pen) + kAbsTol;
      const double violation = -slack / scale;
      if (slack < worst.slack) {
        worst.slack = slack;
      }
      if (violation > worst.violation) {
        worst.violation = violation;
        worst.index = k;
      }
    }
    local[c] = worst;
  });

  MembershipVerdict out;
  out.sample_size = m;
  Worst all;
  for (const auto& wv : local) {
    all.slack = std::min(all.slack, wv.slack);
    if (wv.violation > all.violation) {
      all.violation = wv.violation;
      all.index = wv.index;
    }
  }
  out.margin = all.slack;
  out.holds = !(all.violation > 1.0);
  if (!out.holds) out.witness = Point(sample.xs[all.index]);
  return out;
}

MembershipVerdict global_min_certificate(const FunctionOracle& oracle, const Point& xbar,
                                         const SampleSpec& spec) {
  WeakSubgradient zero;
  zero.v.assign(xbar.dim(), 0.0);
  zero.c = 0.0;
  return verify_membership(oracle, xbar, zero, spec);
}

std::optional<std::pair<double, double>> wsub_interval_1d(double fr_plus, double fr_minus,
                                                          double c) {
  if (!std::isfinite(fr_plus) || !std::isfinite(fr_minus))
    throw InvalidArgument("radial values must be finite");
  if (!(c >= 0)) throw InvalidArgument("c must be >= 0");
  const double lo = -c - fr_minus, hi = c + fr_plus;
  if (lo > hi) return std::nullopt;
  return std::make_pair(lo, hi);
}

}  // namespace radex
