#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "radex/errors.hpp"

namespace radex {

enum class NormKind { L2, L1 };

/// A point of R^n.
struct Point {
  std::vector<double> coords;

  Point() = default;
  explicit Point(std::vector<double> c) : coords(std::move(c)) {}
  Point(std::initializer_list<double> c) : coords(c) {}

  std::size_t dim() const { return coords.size(); }
  double operator[](std::size_t i) const { return coords[i]; }
  double& operator[](std::size_t i) { return coords[i]; }
  std::span<const double> span() const { return coords; }

  friend bool operator==(const Point&, const Point&) = default;
};

/// A direction h in R^n together with the norm used to measure it.
struct Direction {
  std::vector<double> coords;
  NormKind norm_kind = NormKind::L2;

  Direction() = default;
  explicit Direction(std::vector<double> c, NormKind k = NormKind::L2)
      : coords(std::move(c)), norm_kind(k) {}
  Direction(std::initializer_list<double> c) : coords(c) {}

  std::size_t dim() const { return coords.size(); }
  double operator[](std::size_t i) const { return coords[i]; }
  std::span<const double> span() const { return coords; }
  bool is_zero() const {
    for (double v : coords)
      if (v != 0.0) return false;
    return true;
  }

  friend bool operator==(const Direction&, const Direction&) = default;
};

inline double norm(std::span<const double> v, NormKind kind = NormKind::L2) {
  double s = 0.0;
  if (kind == NormKind::L1) {
    for (double x : v) s += std::abs(x);
    return s;
  }
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double norm(const Direction& h) { return norm(h.span(), h.norm_kind); }

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline void require_dim(std::size_t expected, std::size_t got) {
  if (expected != got) throw DimensionMismatch(expected, got);
}

/// x + t·u, written into out (resized as needed).
inline void step_into(std::span<const double> x, double t, std::span<const double> u,
                      std::vector<double>& out) {
  out.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + t * u[i];
}

inline Point step(const Point& x, double t, std::span<const double> u) {
  Point p;
  step_into(x.span(), t, u, p.coords);
  return p;
}

}  // namespace radex
