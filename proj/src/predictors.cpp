#include "ofl/predictors.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "ofl/error.hpp"
#include "ofl/rng.hpp"
#include "ofl/text.hpp"

namespace ofl {

std::string_view to_string(PredictorKind kind) {
  switch (kind) {
    case PredictorKind::Alpha: return "alpha";
    case PredictorKind::AlphaGaussian: return "alpha_gaussian";
    case PredictorKind::PerturbGaussian: return "perturb_gaussian";
    case PredictorKind::RandomAlpha: return "random_alpha";
    case PredictorKind::RandomPerturb: return "random_perturb";
  }
  return "alpha";
}

PredictorKind parse_predictor_kind(std::string_view name) {
  for (auto k : {PredictorKind::Alpha, PredictorKind::AlphaGaussian, PredictorKind::PerturbGaussian,
                 PredictorKind::RandomAlpha, PredictorKind::RandomPerturb}) {
    if (name == to_string(k)) return k;
  }
  throw ParseError("unknown predictor '" + std::string(name) + "'");
}

bool is_gaussian(PredictorKind kind) noexcept {
  return kind == PredictorKind::AlphaGaussian || kind == PredictorKind::PerturbGaussian ||
         kind == PredictorKind::RandomPerturb;
}

void PredictorSpec::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("predictor alpha must lie in [0, 1]");
  if (!(std >= 0.0) || !std::isfinite(std)) throw InvalidArgument("predictor std must be >= 0");
}

std::string PredictionSequence::provenance() const {
  if (!label.empty()) return label;
  std::string s(to_string(spec.kind));
  s += "(alpha=" + text::format_double(spec.alpha);
  if (is_gaussian(spec.kind)) s += ",std=" + text::format_double(spec.std);
  s += ",seed=" + std::to_string(seed) + ")";
  return s;
}

namespace {

// c + g * (s .* (x - c)) with exact endpoints for g in {0, 1} and s = +1.
EuclideanPoint scaled(const EuclideanPoint& c, const EuclideanPoint& x, double g, const std::vector<double>* signs) {
  if (g == 0.0) return c;
  if (g == 1.0 && !signs) return x;
  EuclideanPoint p;
  p.coords.resize(c.coords.size());
  for (std::size_t i = 0; i < c.coords.size(); ++i) {
    const double s = signs ? (*signs)[i] : 1.0;
    p.coords[i] = c.coords[i] + g * (s * (x.coords[i] - c.coords[i]));
  }
  return p;
}

Location along_path(const MetricSpace& space, const Location& center, const Location& demand, double g) {
  if (g == 0.0) return center;
  if (g == 1.0) return demand;
  if (space.kind() == SpaceKind::Euclidean)
    return scaled(std::get<EuclideanPoint>(center), std::get<EuclideanPoint>(demand), g, nullptr);
  const double d = space.distance(center, demand);
  if (d == 0.0) return center;
  return space.point_on_path(center, demand, std::min(g * d, d));
}

}  // namespace

PredictionSequence generate_predictions(const Instance& instance, const OfflineSolution& offline,
                                        const PredictorSpec& spec, std::uint64_t seed) {
  spec.validate();
  if (offline.assignment.size() != instance.demands.size())
    throw InvalidArgument("offline solution does not cover the instance's demands");
  const bool euclidean = instance.space.kind() == SpaceKind::Euclidean;
  const bool random_kind = spec.kind == PredictorKind::RandomAlpha || spec.kind == PredictorKind::RandomPerturb;
  if ((random_kind || spec.kind == PredictorKind::PerturbGaussian) && !euclidean)
    throw UnsupportedOperation(std::string(to_string(spec.kind)) + " predictor needs a Euclidean space");

  PredictionSequence out;
  out.spec = spec;
  out.seed = seed;
  out.locations.reserve(instance.demands.size());

  Rng rng(derive_seed(seed, {tag_of(to_string(spec.kind))}));
  const std::size_t dim = euclidean ? instance.space.size() : 0;
  std::vector<double> signs(dim, 1.0);

  for (std::size_t x = 0; x < instance.demands.size(); ++x) {
    const Location& demand = instance.demands[x];
    const Location& center = optimal_center_of(offline, x);

    double g = spec.alpha;
    if (is_gaussian(spec.kind)) g = std::clamp(spec.alpha + spec.std * rng.standard_normal(), 0.0, 1.0);
    if (random_kind) {
      for (std::size_t i = 0; i < dim; i += 64) {
        const std::uint64_t word = rng.bits();
        for (std::size_t b = 0; b < 64 && i + b < dim; ++b) signs[i + b] = (word >> b & 1U) ? -1.0 : 1.0;
      }
    }

    switch (spec.kind) {
      case PredictorKind::Alpha:
      case PredictorKind::AlphaGaussian:
        out.locations.push_back(along_path(instance.space, center, demand, g));
        break;
      case PredictorKind::PerturbGaussian:
        out.locations.push_back(
            scaled(std::get<EuclideanPoint>(center), std::get<EuclideanPoint>(demand), g, nullptr));
        break;
      case PredictorKind::RandomAlpha:
      case PredictorKind::RandomPerturb:
        out.locations.push_back(
            scaled(std::get<EuclideanPoint>(center), std::get<EuclideanPoint>(demand), g, &signs));
        break;
    }
  }
  return out;
}

ErrorProfile compute_errors(const Instance& instance, const OfflineSolution& offline,
                            std::span<const Location> predictions) {
  const std::size_t n = instance.demands.size();
  if (predictions.size() != n || offline.assignment.size() != n)
    throw InvalidArgument("compute_errors: prediction count " + std::to_string(predictions.size()) +
                          " does not match " + std::to_string(n) + " demands");
  ErrorProfile p;
  p.per_demand.resize(n);
  for (std::size_t x = 0; x < n; ++x) {
    const double eta = instance.space.distance(predictions[x], optimal_center_of(offline, x));
    p.per_demand[x] = eta;
    p.eta1 += eta;
    p.eta_inf = std::max(p.eta_inf, eta);
  }
  p.err1 = p.eta1 / instance.facility_cost;
  p.err_inf = static_cast<double>(n) * p.eta_inf / instance.facility_cost;
  return p;
}

void write_predictions(std::ostream& out, std::span<const Location> predictions) {
  for (const auto& loc : predictions) out << to_string(loc) << '\n';
}

std::vector<Location> read_predictions(std::istream& in) {
  std::vector<Location> out;
  std::string line;
  while (std::getline(in, line)) {
    if (text::trim(line).empty() || line.front() == '#') continue;
    out.push_back(parse_location(line));
  }
  return out;
}

}  // namespace ofl
