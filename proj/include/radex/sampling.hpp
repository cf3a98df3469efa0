#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace radex::sampling {

/// Stable 64-bit hash used to seed the deterministic sequences.
std::uint64_t hash_bytes(std::string_view tag);
std::uint64_t hash_combine(std::uint64_t seed, double value);
std::uint64_t hash_combine(std::uint64_t seed, std::span<const double> values);

/// Seed derived from (module tag, base point, direction).
std::uint64_t seed_for(std::string_view tag, std::span<const double> x, std::span<const double> h);

/// Kronecker (R_d) low-discrepancy sequence in [0,1)^d with a seeded
/// Cranley-Patterson shift.
class Kronecker {
 public:
  Kronecker(std::size_t dim, std::uint64_t seed);
  /// k-th point written to out (size dim).
  void point(std::uint64_t k, std::span<double> out) const;
  std::size_t dim() const { return alpha_.size(); }

 private:
  std::vector<double> alpha_;
  std::vector<double> shift_;
};

/// count offsets in the closed unit ball of R^d (Euclidean), deterministic.
std::vector<std::vector<double>> unit_ball_offsets(std::size_t dim, std::size_t count,
                                                   std::uint64_t seed);

/// count points on the unit sphere of R^d for the given norm (1 = l1, 2 = l2).
/// In 1D the sphere is exactly {-1, +1} and count is ignored.
std::vector<std::vector<double>> unit_sphere_points(std::size_t dim, std::size_t count,
                                                    std::uint64_t seed, int norm = 2);

/// Direction grid: the 2n signed coordinate directions followed by `extra`
/// low-discrepancy unit vectors (n >= 2 only).
std::vector<std::vector<double>> direction_grid(std::size_t dim, std::size_t extra,
                                                std::uint64_t seed = 0x5eed);

/// Log-spaced values lo..hi inclusive with the given points per decade.
std::vector<double> log_grid(double lo, double hi, int points_per_decade);

/// Number of worker threads: RADEX_THREADS if set, else hardware concurrency.
unsigned thread_count();

/// Runs body(begin, end) over contiguous chunks of [0, n). Chunks are fixed by
/// n alone, so callers that reduce per-chunk results in chunk order get the
/// same answer for any thread count.
void parallel_chunks(std::size_t n, std::size_t chunks,
                     const std::function<void(std::size_t chunk, std::size_t begin,
                                              std::size_t end)>& body);

}  // namespace radex::sampling
