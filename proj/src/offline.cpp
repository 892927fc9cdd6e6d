#include "ofl/offline.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "ofl/error.hpp"
#include "ofl/rng.hpp"

namespace ofl {

void Instance::validate() const {
  if (demands.empty()) throw InvalidArgument("instance has no demands");
  if (!(facility_cost > 0.0)) throw InvalidArgument("facility cost must be positive");
  for (const auto& d : demands) space.validate(d);
}

std::string_view to_string(Exactness e) {
  switch (e) {
    case Exactness::Exact: return "exact";
    case Exactness::LocalSearch: return "local_search";
    case Exactness::Given: return "given";
  }
  return "given";
}

Exactness parse_exactness(std::string_view s) {
  if (s == "exact") return Exactness::Exact;
  if (s == "local_search") return Exactness::LocalSearch;
  if (s == "given") return Exactness::Given;
  throw ParseError("unknown exactness '" + std::string(s) + "'");
}

OfflineSolution assign_to_centers(const Instance& instance, std::vector<Location> centers, Exactness exactness) {
  if (centers.empty()) throw InvalidArgument("solution needs at least one center");
  OfflineSolution sol;
  sol.centers = std::move(centers);
  sol.exactness = exactness;
  sol.assignment.resize(instance.demands.size());
  for (std::size_t x = 0; x < instance.demands.size(); ++x) {
    const auto hit = nearest(instance.space, instance.demands[x], sol.centers);
    sol.assignment[x] = hit.index;
    sol.assignment_cost_total += hit.distance;
  }
  sol.facility_cost_total = instance.facility_cost * static_cast<double>(sol.centers.size());
  sol.total = sol.facility_cost_total + sol.assignment_cost_total;
  return sol;
}

namespace {

OfflineSolution from_demand_indices(const Instance& instance, std::span<const std::size_t> idx, Exactness e) {
  std::vector<Location> centers;
  centers.reserve(idx.size());
  for (auto i : idx) centers.push_back(instance.demands[i]);
  return assign_to_centers(instance, std::move(centers), e);
}

}  // namespace

OfflineSolution solve_exact(const Instance& instance, std::size_t max_candidates, kernels::Exec exec) {
  instance.validate();
  const std::size_t n = instance.demands.size();
  if (n > max_candidates || n > 30)
    throw InstanceTooLarge("exact enumeration limited to " + std::to_string(max_candidates) + " demands, got " +
                           std::to_string(n));
  const auto dm = kernels::pairwise_distances(instance.space, instance.demands, exec);
  const auto best = kernels::best_subset(dm, instance.facility_cost, exec);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < n; ++i)
    if (best.mask >> i & 1U) idx.push_back(i);
  return from_demand_indices(instance, idx, Exactness::Exact);
}

OfflineSolution solve_local_search(const Instance& instance, const LocalSearchOptions& options) {
  instance.validate();
  const std::size_t n = instance.demands.size();
  const double f = instance.facility_cost;
  const auto dm = kernels::pairwise_distances(instance.space, instance.demands, options.exec);

  // Distinct demand locations only; a duplicate can never improve on the
  // first copy.
  std::vector<std::size_t> candidates;
  for (std::size_t j = 0; j < n; ++j) {
    bool dup = false;
    for (std::size_t i = 0; i < j && !dup; ++i) dup = dm(i, j) == 0.0 && instance.demands[i] == instance.demands[j];
    if (!dup) candidates.push_back(j);
  }
  // The seed only decides the scan order, i.e. which of several equally good
  // moves wins.
  std::mt19937_64 shuffler(splitmix64(options.seed));
  std::shuffle(candidates.begin(), candidates.end(), shuffler);

  std::vector<std::size_t> centers{0};
  std::vector<char> is_center(n, 0);
  is_center[0] = 1;

  auto total_of = [&](const kernels::CenterCache& cache) {
    double assigned = 0.0;
    for (double d : cache.d1) assigned += d;
    return f * static_cast<double>(centers.size()) + assigned;
  };

  auto cache = kernels::build_center_cache(dm, centers, options.exec);
  double current = total_of(cache);

  for (std::size_t moves = 0; moves < options.max_moves; ++moves) {
    std::vector<std::size_t> closed;
    for (auto j : candidates)
      if (!is_center[j]) closed.push_back(j);
    const auto costs = kernels::evaluate_moves(dm, centers, closed, cache, f, options.exec);
    const std::size_t k = centers.size();

    enum class Move { None, Add, Drop, Swap } move = Move::None;
    double best = current;
    std::size_t best_j = 0, best_c = 0;
    for (std::size_t jp = 0; jp < closed.size(); ++jp) {
      if (costs.add[jp] < best) {
        best = costs.add[jp];
        move = Move::Add;
        best_j = jp;
      }
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (costs.drop[c] < best) {
        best = costs.drop[c];
        move = Move::Drop;
        best_c = c;
      }
    }
    for (std::size_t jp = 0; jp < closed.size(); ++jp) {
      for (std::size_t c = 0; c < k; ++c) {
        if (costs.swap[jp * k + c] < best) {
          best = costs.swap[jp * k + c];
          move = Move::Swap;
          best_j = jp;
          best_c = c;
        }
      }
    }
    if (move == Move::None || !(current - best > options.epsilon * current)) break;

    switch (move) {
      case Move::Add:
        centers.push_back(closed[best_j]);
        is_center[closed[best_j]] = 1;
        break;
      case Move::Drop:
        is_center[centers[best_c]] = 0;
        centers.erase(centers.begin() + static_cast<std::ptrdiff_t>(best_c));
        break;
      case Move::Swap:
        is_center[centers[best_c]] = 0;
        centers[best_c] = closed[best_j];
        is_center[closed[best_j]] = 1;
        break;
      case Move::None: break;
    }
    cache = kernels::build_center_cache(dm, centers, options.exec);
    current = total_of(cache);
  }

  std::sort(centers.begin(), centers.end());
  return from_demand_indices(instance, centers, Exactness::LocalSearch);
}

const Location& optimal_center_of(const OfflineSolution& solution, std::size_t demand_index) {
  if (demand_index >= solution.assignment.size())
    throw std::out_of_range("optimal_center_of: demand index " + std::to_string(demand_index) + " out of range");
  return solution.centers[solution.assignment[demand_index]];
}

}  // namespace ofl
