#include "ofl/online.hpp"

#include <algorithm>
#include <string>

#include "ofl/error.hpp"

namespace ofl {

std::string_view to_string(Algorithm a) {
  return a == Algorithm::Meyerson ? "meyerson" : "predfl";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "meyerson") return Algorithm::Meyerson;
  if (name == "predfl") return Algorithm::PredFL;
  throw ParseError("unknown algorithm '" + std::string(name) + "'");
}

namespace {

void open_at(OnlineState& state, const Location& where, double f) {
  state.open.push_back(where);
  state.fcost += f;
}

// Serves the demand from the (already updated) open set and records the step.
void settle(OnlineState& state, const MetricSpace& space, const Location& demand, double f,
            std::optional<Location> opened, double probability) {
  const auto hit = nearest(space, demand, state.open);
  state.acost += hit.distance;
  if (state.record_trace) {
    const double step_cost = (opened ? f : 0.0) + hit.distance;
    state.trace.push_back(
        DecisionRecord{state.steps, std::move(opened), state.open[hit.index], step_cost, probability});
  }
  ++state.steps;
}

}  // namespace

void meyerson_step(OnlineState& state, const MetricSpace& space, const Location& demand, double f, Rng& rng) {
  const double u = rng.uniform();
  double p = 1.0;
  if (!state.open.empty()) p = std::min(nearest(space, demand, state.open).distance / f, 1.0);
  std::optional<Location> opened;
  if (u < p) {
    open_at(state, demand, f);
    opened = demand;
  }
  settle(state, space, demand, f, std::move(opened), p);
}

void predfl_step(OnlineState& state, const MetricSpace& space, const Location& demand, const Location& prediction,
                 double f, Rng& rng) {
  const double u = rng.uniform();
  std::optional<Location> opened;
  double p = 1.0;
  if (space.distance(demand, prediction) > f) {
    open_at(state, demand, f);
    opened = demand;
  } else {
    if (!state.open.empty()) {
      const auto f_open = nearest(space, demand, state.open);
      const double r = space.distance(state.open[f_open.index], prediction);
      p = std::min(r / f, 1.0);
    }
    if (u < p) {
      open_at(state, prediction, f);
      opened = prediction;
    }
  }
  settle(state, space, demand, f, std::move(opened), p);
}

RunResult to_result(std::string algorithm, std::uint64_t seed, OnlineState state) {
  RunResult r;
  r.algorithm = std::move(algorithm);
  r.seed = seed;
  r.fcost = state.fcost;
  r.acost = state.acost;
  r.total = state.total();
  r.n_opened = state.open.size();
  r.trace = std::move(state.trace);
  return r;
}

RunResult run(Algorithm algorithm, const Instance& instance, std::span<const Location> predictions,
              std::uint64_t seed, const RunOptions& options) {
  instance.validate();
  if (algorithm == Algorithm::PredFL && predictions.size() != instance.demands.size())
    throw InvalidArgument("predfl needs one prediction per demand (got " + std::to_string(predictions.size()) +
                          " for " + std::to_string(instance.demands.size()) + ")");
  OnlineState state;
  state.record_trace = options.record_trace;
  if (options.record_trace) state.trace.reserve(instance.demands.size());
  Rng rng(seed);
  const double f = instance.facility_cost;
  for (std::size_t x = 0; x < instance.demands.size(); ++x) {
    if (algorithm == Algorithm::Meyerson) {
      meyerson_step(state, instance.space, instance.demands[x], f, rng);
    } else {
      predfl_step(state, instance.space, instance.demands[x], predictions[x], f, rng);
    }
  }
  return to_result(std::string(to_string(algorithm)), seed, std::move(state));
}

double competitive_ratio(const RunResult& result, const OfflineSolution& offline) {
  if (!(offline.total > 0.0)) throw InvalidArgument("competitive_ratio: offline cost must be positive");
  return result.total / offline.total;
}

}  // namespace ofl
