#pragma once

// Online facility location algorithms with full cost accounting.
//
// Both algorithms draw exactly one uniform number per demand, whichever
// branch they take. With f^_x = x for every demand, PredFL therefore makes the
// same decisions as Meyerson's algorithm on a shared seed.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ofl/metric.hpp"
#include "ofl/offline.hpp"
#include "ofl/rng.hpp"

namespace ofl {

enum class Algorithm { Meyerson, PredFL };

std::string_view to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view name);

struct DecisionRecord {
  std::size_t demand_index = 0;
  std::optional<Location> opened;
  Location assigned_to;
  double step_cost = 0.0;
  double open_probability = 0.0;

  bool operator==(const DecisionRecord&) const = default;
};

struct OnlineState {
  std::vector<Location> open;  // insertion order
  double fcost = 0.0;
  double acost = 0.0;
  std::vector<DecisionRecord> trace;
  bool record_trace = true;
  std::size_t steps = 0;

  double total() const noexcept { return fcost + acost; }
};

/// Opens at the demand with probability min(d(x, O) / f, 1); always opens when
/// nothing is open yet. The demand is then served by its nearest open facility.
void meyerson_step(OnlineState& state, const MetricSpace& space, const Location& demand, double f, Rng& rng);

/// PredFL step:
///   d(x, f^) > f          -> open at x
///   O empty               -> open at f^
///   otherwise             -> open at f^ w.p. min(d(f_open, f^) / f, 1), where
///                            f_open is the open facility nearest to x
/// then serve x from its nearest open facility.
void predfl_step(OnlineState& state, const MetricSpace& space, const Location& demand, const Location& prediction,
                 double f, Rng& rng);

struct RunResult {
  std::string algorithm;
  std::uint64_t seed = 0;
  double total = 0.0;
  double fcost = 0.0;
  double acost = 0.0;
  std::size_t n_opened = 0;
  std::vector<DecisionRecord> trace;
};

struct RunOptions {
  bool record_trace = true;
};

/// Folds the per-step rule over the demand sequence with Rng(seed).
/// PredFL requires one prediction per demand; Meyerson ignores predictions.
RunResult run(Algorithm algorithm, const Instance& instance, std::span<const Location> predictions,
              std::uint64_t seed, const RunOptions& options = {});

RunResult to_result(std::string algorithm, std::uint64_t seed, OnlineState state);

/// result.total / offline.total. Throws InvalidArgument if offline.total is 0.
double competitive_ratio(const RunResult& result, const OfflineSolution& offline);

}  // namespace ofl
