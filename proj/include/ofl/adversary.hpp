#pragma once

// Randomized lower-bound instances on a binary hierarchically well-separated
// tree (HST).
//
// The tree has lambda = m * alpha levels; an edge from a level-i vertex to a
// child has length m^(lambda-1-i) / alpha. Phase i places K * m^i / alpha
// demands on v_i, where v_0 is the root and v_i is a uniformly random child of
// v_{i-1}. The facility cost is K * m^lambda / alpha. K is the smallest
// positive integer making every phase size integral (K = 1 whenever 1/alpha
// is an integer); scaling demand counts and f together leaves the
// facility/assignment trade-off unchanged.
//
// The phase-i prediction sits on the path from v_lambda towards v_i at
// distance alpha * d(v_i, v_lambda) from v_lambda, clamped to the edge
// (v_i, v_{i+1}).

#include <cstdint>
#include <string>
#include <vector>

#include "ofl/kernels.hpp"
#include "ofl/metric.hpp"
#include "ofl/offline.hpp"
#include "ofl/online.hpp"
#include "ofl/predictors.hpp"

namespace ofl {

struct Rational {
  std::int64_t num = 1;
  std::int64_t den = 1;

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  Rational reduced() const;
  std::string str() const;
  /// "p/q" or an integer.
  static Rational parse(std::string_view s);
};

struct HstOptions {
  /// Full trees with more vertices than this are rejected by build_hst.
  std::size_t node_budget = std::size_t{1} << 22;
  /// Full materialization only up to this depth; deeper instances keep the
  /// random path and its siblings only.
  int max_full_depth = 20;
  std::size_t demand_budget = 20'000'000;
};

/// lambda = m * alpha. Throws InvalidArgument if it is not a positive integer
/// or m < 2.
int hst_levels(int m, Rational alpha);

/// Complete binary tree in heap order (root 0, children 2v+1 and 2v+2).
MetricSpace build_hst(int m, Rational alpha, const HstOptions& options = {});

struct HstInstance {
  MetricSpace tree;
  bool full_tree = true;
  int m = 2;
  Rational alpha;
  int lambda = 0;
  std::int64_t demand_multiplier = 1;
  double facility_cost = 0.0;
  std::vector<std::uint32_t> path;          // v_0 .. v_lambda
  std::vector<std::size_t> phase_sizes;     // demands per phase
  Instance instance;
  PredictionSequence predictions;
  OfflineSolution single_center;            // one facility at v_lambda
  double declared_eta1 = 0.0;
  double opt_bound = 0.0;                   // 2 f m / (m - 1)
};

HstInstance generate_lower_bound_instance(int m, Rational alpha, std::uint64_t seed, const HstOptions& options = {});

struct AdversarialSummary {
  double mean_ratio = 0.0;
  double max_ratio = 0.0;
  std::vector<double> ratios;
  std::vector<double> opt_totals;
  std::vector<double> opt_bounds;
};

/// Runs `algorithm` on `trials` freshly drawn instances (with their adversarial
/// predictions) and reports cost / cost(single center at v_lambda).
AdversarialSummary measure_adversarial_ratio(int m, Rational alpha, Algorithm algorithm, std::size_t trials,
                                             std::uint64_t seed, kernels::Exec exec = kernels::Exec::Parallel,
                                             const HstOptions& options = {});

}  // namespace ofl
