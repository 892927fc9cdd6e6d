#pragma once

// Data-parallel kernels.
//
// Every kernel takes an Exec flag. Exec::Serial is the reference
// implementation kept for testing; Exec::Parallel splits the same loop over
// OpenMP threads. Each output slot is computed by exactly the same
// floating-point sequence in both modes, and reductions are combined in index
// order, so the two modes return bit-identical results.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ofl/metric.hpp"

namespace ofl::kernels {

enum class Exec { Serial, Parallel };

/// Dense symmetric distance matrix over a list of locations.
struct DistanceMatrix {
  std::size_t n = 0;
  std::vector<double> d;  // row-major n*n

  double operator()(std::size_t i, std::size_t j) const noexcept { return d[i * n + j]; }
  std::span<const double> row(std::size_t i) const noexcept { return {d.data() + i * n, n}; }
};

DistanceMatrix pairwise_distances(const MetricSpace& space, std::span<const Location> locs, Exec exec);

/// Largest entry (the diameter of the point set).
double max_entry(const DistanceMatrix& dm, Exec exec);

/// Exhaustive search over the non-empty subsets of {0..n-1} used as centers.
/// Cost of a subset S is f*|S| + sum_x min_{c in S} d(x, c). Ties go to the
/// numerically smallest mask.
struct SubsetBest {
  std::uint64_t mask = 0;
  double cost = 0.0;
};
SubsetBest best_subset(const DistanceMatrix& dm, double facility_cost, Exec exec);

/// Nearest / second-nearest open center per demand, as used by local search.
struct CenterCache {
  std::vector<double> d1;           // distance to nearest center
  std::vector<double> d2;           // distance to second nearest (inf if only one)
  std::vector<std::uint32_t> c1;    // position of the nearest center in the center list
};

CenterCache build_center_cache(const DistanceMatrix& dm, std::span<const std::size_t> centers, Exec exec);

/// Candidate move costs for a fixed center list. For each candidate j (by
/// position in `candidates`):
///   add[j]          = total cost after adding j
///   swap[j*k + c]   = total cost after replacing centers[c] with j
/// and drop[c] = total cost after removing centers[c] (inf if k == 1).
/// Candidates already open must be filtered out by the caller.
struct MoveCosts {
  std::vector<double> add;
  std::vector<double> swap;
  std::vector<double> drop;
};
MoveCosts evaluate_moves(const DistanceMatrix& dm, std::span<const std::size_t> centers,
                         std::span<const std::size_t> candidates, const CenterCache& cache,
                         double facility_cost, Exec exec);

/// Calls fn(i) for i in [0, n). Parallel mode requires fn to touch only
/// per-index state.
template <class Fn>
void for_each_index(std::size_t n, Exec exec, Fn&& fn) {
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
}

}  // namespace ofl::kernels
