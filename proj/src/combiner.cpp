#include "ofl/combiner.hpp"

#include <cmath>
#include <string>

#include "ofl/error.hpp"
#include "ofl/rng.hpp"

namespace ofl {

std::uint64_t shadow_seed(std::uint64_t seed, int index) noexcept {
  return derive_seed(seed, {tag_of("min-shadow"), static_cast<std::uint64_t>(index)});
}

CombinerResult min_combine(const Instance& instance, std::span<const Location> predictions, Algorithm a,
                           Algorithm b, std::uint64_t seed, const RunOptions& options) {
  instance.validate();
  const std::array<Algorithm, 2> algs{a, b};
  for (auto alg : algs) {
    if (alg == Algorithm::PredFL && predictions.size() != instance.demands.size())
      throw InvalidArgument("min_combine: predfl needs one prediction per demand");
  }

  CombinerResult out;
  std::array<OnlineState, 2> shadow;
  std::array<Rng, 2> rng{Rng(shadow_seed(seed, 0)), Rng(shadow_seed(seed, 1))};
  for (int k = 0; k < 2; ++k) {
    out.shadow_seeds[k] = shadow_seed(seed, k);
    shadow[k].record_trace = options.record_trace;
  }

  std::array<double, 2> prev_fcost{0.0, 0.0};
  std::array<double, 2> prev_cost{0.0, 0.0};
  int i = 0;
  int ell = 0;
  double ledger = 0.0;
  double facility_part = 0.0;
  double assignment_part = 0.0;
  const double f = instance.facility_cost;

  for (std::size_t x = 0; x < instance.demands.size(); ++x) {
    std::array<double, 2> before_total{}, before_fcost{};
    for (int k = 0; k < 2; ++k) {
      before_total[k] = shadow[k].total();
      before_fcost[k] = shadow[k].fcost;
      if (algs[k] == Algorithm::Meyerson) {
        meyerson_step(shadow[k], instance.space, instance.demands[x], f, rng[k]);
      } else {
        predfl_step(shadow[k], instance.space, instance.demands[x], predictions[x], f, rng[k]);
      }
    }

    CombinerStep step;
    step.demand_index = x;
    step.followed = i;
    step.charged = shadow[i].total() - before_total[i];
    const double charged_f = shadow[i].fcost - before_fcost[i];
    facility_part += charged_f;
    assignment_part += step.charged - charged_f;
    ledger += step.charged;
    out.charged_total += step.charged;

    // Budget exceeded: either raise the budget, or catch up with the other
    // algorithm's facilities and follow it.
    while (shadow[i].total() > std::ldexp(1.0, ell)) {
      const int other = 1 - i;
      const double extra = shadow[other].fcost - prev_fcost[other];
      if (extra > shadow[i].total() + prev_cost[other]) {
        ++ell;
        continue;
      }
      step.switch_payment += extra;
      ledger += extra;
      facility_part += extra;
      out.switch_total += extra;
      prev_fcost = {shadow[0].fcost, shadow[1].fcost};
      prev_cost = {shadow[0].total(), shadow[1].total()};
      ++ell;
      i = other;
      ++step.switches;
    }
    step.ell = ell;
    if (options.record_trace) out.steps.push_back(step);
  }

  out.final_ell = ell;
  out.result.algorithm = "min(" + std::string(to_string(a)) + "," + std::string(to_string(b)) + ")";
  out.result.seed = seed;
  out.result.total = ledger;
  out.result.fcost = facility_part;
  out.result.acost = assignment_part;
  out.result.n_opened = 0;
  for (int k = 0; k < 2; ++k) {
    out.shadows[k] = to_result(std::string(to_string(algs[k])), out.shadow_seeds[k], std::move(shadow[k]));
  }
  // Facilities MIN owns: everything its followed algorithm opened while being
  // followed plus the ones bought on switching; bounded by the union.
  out.result.n_opened = static_cast<std::size_t>(std::llround(facility_part / f));
  return out;
}

}  // namespace ofl
