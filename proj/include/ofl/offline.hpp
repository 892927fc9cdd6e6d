#pragma once

// Offline facility location: the OPT baselines and the source of the optimal
// centers that predictions are generated from.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "ofl/kernels.hpp"
#include "ofl/metric.hpp"

namespace ofl {

/// Ordered demand sequence with a uniform facility opening cost.
struct Instance {
  MetricSpace space;
  std::vector<Location> demands;
  double facility_cost = 1.0;

  /// Throws InvalidArgument / MalformedLocation.
  void validate() const;
  std::size_t size() const noexcept { return demands.size(); }
};

enum class Exactness { Exact, LocalSearch, Given };

std::string_view to_string(Exactness e);
Exactness parse_exactness(std::string_view s);

struct OfflineSolution {
  std::vector<Location> centers;
  /// Index of the center each demand is served by (nearest, lowest index on
  /// ties).
  std::vector<std::size_t> assignment;
  double facility_cost_total = 0.0;
  double assignment_cost_total = 0.0;
  double total = 0.0;
  Exactness exactness = Exactness::Given;
};

/// Builds a solution from an explicit center list, assigning every demand to
/// its nearest center.
OfflineSolution assign_to_centers(const Instance& instance, std::vector<Location> centers,
                                  Exactness exactness = Exactness::Given);

/// Minimum-cost solution over all non-empty subsets of demand locations.
/// Throws InstanceTooLarge if there are more than `max_candidates` demands.
OfflineSolution solve_exact(const Instance& instance, std::size_t max_candidates = 16,
                            kernels::Exec exec = kernels::Exec::Parallel);

struct LocalSearchOptions {
  double epsilon = 1e-4;
  std::uint64_t seed = 0;
  kernels::Exec exec = kernels::Exec::Parallel;
  /// Hard cap on applied moves; the epsilon rule normally stops far earlier.
  std::size_t max_moves = 100000;
};

/// Add / drop / swap local search over demand locations, starting from a
/// single center at the first demand. A move is applied only while it improves
/// the total by more than epsilon * total.
OfflineSolution solve_local_search(const Instance& instance, const LocalSearchOptions& options = {});

/// The center demand `demand_index` is assigned to. Throws std::out_of_range.
const Location& optimal_center_of(const OfflineSolution& solution, std::size_t demand_index);

}  // namespace ofl
