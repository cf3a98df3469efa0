#include "radex/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numbers>
#include <thread>

namespace radex::sampling {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double to_unit(std::uint64_t x) { return static_cast<double>(x >> 11) * 0x1.0p-53; }

}  // namespace

std::uint64_t hash_bytes(std::string_view tag) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : tag) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(h);
}

std::uint64_t hash_combine(std::uint64_t seed, double value) {
  if (value == 0.0) value = 0.0;  // fold -0 into +0
  return splitmix64(seed ^ std::bit_cast<std::uint64_t>(value));
}

std::uint64_t hash_combine(std::uint64_t seed, std::span<const double> values) {
  for (double v : values) seed = hash_combine(seed, v);
  return seed;
}

std::uint64_t seed_for(std::string_view tag, std::span<const double> x,
                       std::span<const double> h) {
  return hash_combine(hash_combine(hash_bytes(tag), x), h);
}

Kronecker::Kronecker(std::size_t dim, std::uint64_t seed) : alpha_(dim), shift_(dim) {
  // phi_d is the unique positive root of x^(d+1) = x + 1.
  double phi = 2.0;
  for (int i = 0; i < 64; ++i) phi = std::pow(1.0 + phi, 1.0 / static_cast<double>(dim + 1));
  std::uint64_t s = seed;
  for (std::size_t i = 0; i < dim; ++i) {
    alpha_[i] = std::fmod(std::pow(1.0 / phi, static_cast<double>(i + 1)), 1.0);
    s = splitmix64(s);
    shift_[i] = to_unit(s);
  }
}

void Kronecker::point(std::uint64_t k, std::span<double> out) const {
  const double kk = static_cast<double>(k);
  for (std::size_t i = 0; i < alpha_.size(); ++i) {
    double v = shift_[i] + kk * alpha_[i];
    out[i] = v - std::floor(v);
  }
}

std::vector<std::vector<double>> unit_ball_offsets(std::size_t dim, std::size_t count,
                                                   std::uint64_t seed) {
  Kronecker seq(dim, seed);
  std::vector<std::vector<double>> out;
  out.reserve(count);
  std::vector<double> z(dim);
  for (std::size_t k = 0; k < count; ++k) {
    seq.point(k + 1, z);
    double inf_norm = 0.0, two_norm = 0.0;
    for (double& v : z) {
      v = 2.0 * v - 1.0;
      inf_norm = std::max(inf_norm, std::abs(v));
      two_norm += v * v;
    }
    two_norm = std::sqrt(two_norm);
    // Radial map from the cube [-1,1]^d onto the Euclidean unit ball.
    if (two_norm > 0.0)
      for (double& v : z) v *= inf_norm / two_norm;
    out.push_back(z);
  }
  return out;
}

std::vector<std::vector<double>> unit_sphere_points(std::size_t dim, std::size_t count,
                                                    std::uint64_t seed, int norm) {
  if (dim == 1) return {{-1.0}, {1.0}};
  // Box-Muller on Kronecker coordinates gives isotropic Gaussian vectors.
  const std::size_t coords = dim + (dim % 2);
  Kronecker seq(coords, seed);
  std::vector<double> u(coords), g(coords);
  std::vector<std::vector<double>> out;
  out.reserve(count);
  for (std::size_t k = 0; out.size() < count; ++k) {
    seq.point(k + 1, u);
    for (std::size_t i = 0; i + 1 < coords; i += 2) {
      double r = std::sqrt(-2.0 * std::log(std::max(u[i], 1e-300)));
      double a = 2.0 * std::numbers::pi * u[i + 1];
      g[i] = r * std::cos(a);
      g[i + 1] = r * std::sin(a);
    }
    std::vector<double> p(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(dim));
    double n = 0.0;
    for (double v : p) n += norm == 1 ? std::abs(v) : v * v;
    if (norm != 1) n = std::sqrt(n);
    if (!(n > 1e-12)) continue;
    for (double& v : p) v /= n;
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<std::vector<double>> direction_grid(std::size_t dim, std::size_t extra,
                                                std::uint64_t seed) {
  std::vector<std::vector<double>> out;
  if (dim == 1) return {{-1.0}, {1.0}};
  for (std::size_t i = 0; i < dim; ++i) {
    for (double s : {1.0, -1.0}) {
      std::vector<double> e(dim, 0.0);
      e[i] = s;
      out.push_back(std::move(e));
    }
  }
  auto sphere = unit_sphere_points(dim, extra, seed);
  out.insert(out.end(), sphere.begin(), sphere.end());
  return out;
}

std::vector<double> log_grid(double lo, double hi, int points_per_decade) {
  std::vector<double> out;
  const double a = std::log10(lo), b = std::log10(hi);
  const auto steps = static_cast<long>(std::ceil((b - a) * points_per_decade - 1e-9));
  if (steps <= 0) return {lo};
  for (long i = 0; i <= steps; ++i) {
    double e = a + (b - a) * static_cast<double>(i) / static_cast<double>(steps);
    out.push_back(std::pow(10.0, e));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

unsigned thread_count() {
  static const unsigned n = [] {
    if (const char* env = std::getenv("RADEX_THREADS")) {
      long v = std::strtol(env, nullptr, 10);
      if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return std::clamp(hw, 1u, 16u);
  }();
  return n;
}

void parallel_chunks(std::size_t n, std::size_t chunks,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  chunks = std::clamp<std::size_t>(chunks, 1, n);
  auto range = [&](std::size_t c) {
    return std::pair{n * c / chunks, n * (c + 1) / chunks};
  };
  const unsigned threads = std::min<unsigned>(thread_count(), static_cast<unsigned>(chunks));
  if (threads <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) {
      auto [b, e] = range(c);
      body(c, b, e);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  // One slot per chunk so the reported failure does not depend on scheduling.
  std::vector<std::exception_ptr> failures(chunks);
  auto worker = [&] {
    for (;;) {
      std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        auto [b, e] = range(c);
        body(c, b, e);
      } catch (...) {
        failures[c] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (auto& f : failures)
    if (f) std::rethrow_exception(f);
}

}  // namespace radex::sampling
