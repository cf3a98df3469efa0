#pragma once

// Property checks over the registry: every function, five probe points each.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "radex/exact1d.hpp"
#include "radex/genderiv.hpp"
#include "radex/sampling.hpp"
#include "support.hpp"

namespace radex::test {

struct SuiteResult {
  std::size_t checked = 0;
  std::vector<std::string> failures;
  bool ok() const { return checked > 0 && failures.empty(); }
};

inline std::string where(const std::string& f, double x, double h) {
  std::ostringstream os;
  os << f << "(" << x << ";" << h << ")";
  return os.str();
}

inline bool converged(const DerivativeEstimate& e) {
  return e.status == EstimateStatus::Converged && e.value.is_finite();
}

// |f^r(x̄;λh) - λ·f^r(x̄;h)| <= λ·tol·max(1, |f^r(x̄;h)|).
inline SuiteResult homogeneity_suite(double tol) {
  SuiteResult r;
  for (const auto& f : registry_names()) {
    for (double x : probe_points(f)) {
      for (double h : {-1.0, 1.0}) {
        const DerivativeEstimate base = radial(f, x, h);
        for (double lam : {0.5, 2.0, 10.0}) {
          const DerivativeEstimate scaled = radial(f, x, lam * h);
          if (base.value.is_minus_infinity() || scaled.value.is_minus_infinity()) {
            ++r.checked;
            if (base.value != scaled.value) r.failures.push_back(where(f, x, lam * h) + " -inf mismatch");
            continue;
          }
          if (!converged(base) || !converged(scaled)) continue;
          ++r.checked;
          const double b = base.value.raw();
          const double gap = std::abs(scaled.value.raw() - lam * b);
          if (gap > lam * tol * std::max(1.0, std::abs(b)))
            r.failures.push_back(where(f, x, lam * h) + " gap " + std::to_string(gap));
        }
      }
    }
  }
  return r;
}

// f^r <= df <= f' <= f° over every pair of Converged cells.
inline SuiteResult ordering_suite(double tol) {
  SuiteResult r;
  for (const auto& f : registry_names()) {
    for (double x : probe_points(f)) {
      for (double h : {-1.0, 1.0}) {
        const Point xb{x};
        const Direction d{h};
        const DerivativeEstimate chain[] = {radial(f, x, h), subderivative(fn(f), xb, d),
                                            directional_derivative(fn(f), xb, d),
                                            clarke_derivative(fn(f), xb, d)};
        for (int i = 0; i < 4; ++i) {
          for (int j = i + 1; j < 4; ++j) {
            if (chain[i].status != EstimateStatus::Converged ||
                chain[j].status != EstimateStatus::Converged)
              continue;
            ++r.checked;
            const double a = chain[i].value.raw(), b = chain[j].value.raw();
            const double slack = (j - i) * tol * std::max({1.0, std::abs(a), std::abs(b)});
            if (!(a <= b + slack))
              r.failures.push_back(where(f, x, h) + " chain " + std::to_string(i) + ">" +
                                   std::to_string(j) + ": " + std::to_string(a) + " > " +
                                   std::to_string(b));
          }
        }
      }
    }
  }
  return r;
}

// 200 points per base point: half uniform in x̄ ± 10, half log-spaced out to the box edge.
inline std::vector<double> support_sample(double x) {
  std::vector<double> out;
  for (int k = 0; k < 100; ++k) out.push_back(x - 10.0 + 20.0 * (k + 0.5) / 100.0);
  for (int k = 0; k < 50; ++k) {
    const double r = std::pow(10.0, -3.0 + 9.0 * k / 49.0);
    out.push_back(x + r);
    out.push_back(x - r);
  }
  return out;
}

// f^r(x̄; x - x̄) <= f(x) - f(x̄) + tol·max(1, |f^r|).
inline SuiteResult support_suite(double tol) {
  SuiteResult r;
  for (const auto& f : registry_names()) {
    const FunctionOracle& o = fn(f);
    for (double x : probe_points(f)) {
      const std::vector<double> xs = support_sample(x);
      std::vector<DerivativeEstimate> est(xs.size());
      sampling::parallel_chunks(xs.size(), xs.size(), [&](std::size_t, std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) est[i] = radial(f, x, xs[i] - x);
      });
      const double fbar = o.at(x).raw();
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (est[i].status == EstimateStatus::NotConvergent) continue;
        ++r.checked;
        if (est[i].value.is_minus_infinity()) continue;
        const double lhs = est[i].value.raw();
        const double rhs = o.at(xs[i]).raw() - fbar;
        if (!(lhs <= rhs + tol * std::max(1.0, std::abs(lhs))))
          r.failures.push_back(where(f, x, xs[i] - x) + ": " + std::to_string(lhs) + " > " +
                               std::to_string(rhs));
      }
    }
  }
  return r;
}

// Estimator against the exact piecewise computation.
inline SuiteResult exact_agreement_suite(double tol) {
  SuiteResult r;
  for (const char* f : {"f1", "f3", "f8", "f9"}) {
    const PiecewiseFn1D& pw = *fn(f).exact_form();
    for (double x : probe_points(f)) {
      for (double h : {-1.0, 1.0}) {
        ++r.checked;
        const ExtendedReal ex = exact_radial_epiderivative(pw, x, h);
        const DerivativeEstimate est = radial(f, x, h);
        const bool ok = ex.is_finite() ? std::abs(est.value.raw() - ex.raw()) <= tol
                                       : est.value == ex;
        if (!ok)
          r.failures.push_back(where(f, x, h) + ": exact " + ex.to_string() + " estimate " +
                               est.value.to_string());
      }
    }
  }
  return r;
}

}  // namespace radex::test
