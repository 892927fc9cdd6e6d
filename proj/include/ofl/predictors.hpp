#pragma once

// Synthetic prediction generators and prediction-error profiles.
//
// All generators place f^_x relative to the optimal center c*_x of demand x:
//   Alpha            at distance alpha * d(x, c*) from c* on the c*->x path
//   AlphaGaussian    same with g ~ N(alpha, std) clamped to [0, 1]
//   PerturbGaussian  p = c + g * (x - c), g as above (Euclidean only)
//   RandomAlpha      p = c + alpha * (s .* (x - c)), s uniform in {-1,+1}^dim
//   RandomPerturb    p = c + g * (s .* (x - c))
// alpha = 0 puts every prediction on its optimal center, alpha = 1 on its
// demand.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ofl/metric.hpp"
#include "ofl/offline.hpp"

namespace ofl {

enum class PredictorKind { Alpha, AlphaGaussian, PerturbGaussian, RandomAlpha, RandomPerturb };

std::string_view to_string(PredictorKind kind);
PredictorKind parse_predictor_kind(std::string_view name);
bool is_gaussian(PredictorKind kind) noexcept;

struct PredictorSpec {
  PredictorKind kind = PredictorKind::Alpha;
  double alpha = 0.0;
  double std = 0.0;

  void validate() const;
};

struct PredictionSequence {
  std::vector<Location> locations;
  PredictorSpec spec;
  std::uint64_t seed = 0;
  /// Overrides the provenance for sequences not made by a PredictorSpec.
  std::string label;

  std::size_t size() const noexcept { return locations.size(); }
  /// e.g. "alpha_gaussian(alpha=0.25,std=0.1,seed=7)"
  std::string provenance() const;
};

PredictionSequence generate_predictions(const Instance& instance, const OfflineSolution& offline,
                                        const PredictorSpec& spec, std::uint64_t seed);

struct ErrorProfile {
  std::vector<double> per_demand;  // eta_x = d(f^_x, c*_x)
  double eta1 = 0.0;
  double eta_inf = 0.0;
  double err1 = 0.0;     // eta1 / f
  double err_inf = 0.0;  // n * eta_inf / f
};

ErrorProfile compute_errors(const Instance& instance, const OfflineSolution& offline,
                            std::span<const Location> predictions);

/// One location per line, in the format of ofl::to_string(Location).
void write_predictions(std::ostream& out, std::span<const Location> predictions);
std::vector<Location> read_predictions(std::istream& in);

}  // namespace ofl
