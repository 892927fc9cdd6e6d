#include "ofl/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ofl/error.hpp"
#include "ofl/rng.hpp"
#include "ofl/text.hpp"

namespace ofl {

Rational Rational::reduced() const {
  if (den == 0) throw InvalidArgument("rational with zero denominator");
  const auto g = std::gcd(num, den);
  Rational r{num / g, den / g};
  if (r.den < 0) r = {-r.num, -r.den};
  return r;
}

std::string Rational::str() const {
  const auto r = reduced();
  return r.den == 1 ? std::to_string(r.num) : std::to_string(r.num) + "/" + std::to_string(r.den);
}

Rational Rational::parse(std::string_view s) {
  s = text::trim(s);
  const auto slash = s.find('/');
  const auto num = text::parse_int(s.substr(0, slash));
  const auto den = slash == std::string_view::npos ? std::optional<long long>(1) : text::parse_int(s.substr(slash + 1));
  if (!num || !den || *den == 0) throw ParseError("bad rational '" + std::string(s) + "'");
  return Rational{*num, *den}.reduced();
}

int hst_levels(int m, Rational alpha) {
  if (m < 2) throw InvalidArgument("hst: m must be >= 2");
  const auto a = alpha.reduced();
  if (a.num <= 0) throw InvalidArgument("hst: alpha must be positive");
  const std::int64_t scaled = static_cast<std::int64_t>(m) * a.num;
  if (scaled % a.den != 0) throw InvalidArgument("hst: lambda = m * alpha must be an integer");
  const std::int64_t lambda = scaled / a.den;
  if (lambda < 1 || lambda > 62) throw InvalidArgument("hst: lambda out of range");
  return static_cast<int>(lambda);
}

namespace {

// Edge from a level-(level-1) vertex down to a level-`level` child.
double child_edge(int m, double alpha, int lambda, int level) {
  return std::pow(static_cast<double>(m), lambda - level) / alpha;
}

}  // namespace

MetricSpace build_hst(int m, Rational alpha, const HstOptions& options) {
  const int lambda = hst_levels(m, alpha);
  const double a = alpha.value();
  if (lambda >= 62 || ((std::size_t{2} << lambda) - 1) > options.node_budget)
    throw InstanceTooLarge("hst: full tree with lambda = " + std::to_string(lambda) + " exceeds the node budget");
  const std::size_t n = (std::size_t{2} << lambda) - 1;
  std::vector<std::uint32_t> parent(n, kNoParent);
  std::vector<double> length(n, 0.0);
  int level = 0;
  for (std::size_t v = 1; v < n; ++v) {
    if (((v + 1) & v) == 0) ++level;  // v + 1 is a power of two
    parent[v] = static_cast<std::uint32_t>((v - 1) / 2);
    length[v] = child_edge(m, a, lambda, level);
  }
  return MetricSpace::tree(std::move(parent), std::move(length));
}

HstInstance generate_lower_bound_instance(int m, Rational alpha_in, std::uint64_t seed, const HstOptions& options) {
  const Rational alpha = alpha_in.reduced();
  const int lambda = hst_levels(m, alpha);
  const double a = alpha.value();

  HstInstance out;
  out.m = m;
  out.alpha = alpha;
  out.lambda = lambda;
  out.demand_multiplier = alpha.num;  // smallest K with K / alpha integral
  const double mult = static_cast<double>(out.demand_multiplier);
  out.facility_cost = mult * std::pow(static_cast<double>(m), lambda) / a;

  // Phase sizes K * m^i / alpha = num_K * m^i * den / num.
  double total = 0.0;
  for (int i = 0; i <= lambda; ++i) {
    const double size = mult * std::pow(static_cast<double>(m), i) / a;
    out.phase_sizes.push_back(static_cast<std::size_t>(std::llround(size)));
    total += size;
  }
  if (total > static_cast<double>(options.demand_budget))
    throw InstanceTooLarge("hst: " + std::to_string(total) + " demands exceed the demand budget");

  Rng rng(derive_seed(seed, {tag_of("hst-path")}));
  const bool full = lambda <= options.max_full_depth && ((std::size_t{2} << lambda) - 1) <= options.node_budget;
  out.full_tree = full;
  out.path.push_back(0);
  if (full) {
    out.tree = build_hst(m, alpha, options);
    for (int i = 1; i <= lambda; ++i) {
      const std::uint32_t right = static_cast<std::uint32_t>(rng.bits() & 1U);
      out.path.push_back(2 * out.path.back() + 1 + right);
    }
  } else {
    // Random path plus the sibling of every path vertex; enough for every
    // distance the instance needs.
    std::vector<std::uint32_t> parent{kNoParent};
    std::vector<double> length{0.0};
    for (int i = 1; i <= lambda; ++i) {
      const std::uint32_t right = static_cast<std::uint32_t>(rng.bits() & 1U);
      const auto base = static_cast<std::uint32_t>(parent.size());
      for (int c = 0; c < 2; ++c) {
        parent.push_back(out.path.back());
        length.push_back(child_edge(m, a, lambda, i));
      }
      out.path.push_back(base + right);
    }
    out.tree = MetricSpace::tree(std::move(parent), std::move(length));
  }

  const auto& tree = out.tree;
  const Location leaf = NodeRef{out.path.back()};
  out.instance.space = tree;
  out.instance.facility_cost = out.facility_cost;
  out.predictions.label = "hst_adversary(m=" + std::to_string(m) + ",alpha=" + alpha.str() + ",seed=" +
                          std::to_string(seed) + ")";
  out.predictions.seed = seed;
  for (int i = 0; i <= lambda; ++i) {
    const Location vi = NodeRef{out.path[i]};
    Location pred = leaf;
    if (i < lambda) {
      const Location next = NodeRef{out.path[i + 1]};
      const double span_hi = tree.distance(vi, leaf);
      const double span_lo = tree.distance(next, leaf);
      const double t = std::clamp(a * span_hi, span_lo, span_hi);
      pred = tree.point_on_path(leaf, vi, t);
    }
    for (std::size_t k = 0; k < out.phase_sizes[i]; ++k) {
      out.instance.demands.push_back(vi);
      out.predictions.locations.push_back(pred);
    }
  }

  out.single_center = assign_to_centers(out.instance, {leaf}, Exactness::Given);
  out.declared_eta1 = compute_errors(out.instance, out.single_center, out.predictions.locations).eta1;
  out.opt_bound = 2.0 * out.facility_cost * m / (m - 1.0);
  return out;
}

AdversarialSummary measure_adversarial_ratio(int m, Rational alpha, Algorithm algorithm, std::size_t trials,
                                             std::uint64_t seed, kernels::Exec exec, const HstOptions& options) {
  if (trials == 0) throw InvalidArgument("measure_adversarial_ratio: trials must be >= 1");
  hst_levels(m, alpha);
  AdversarialSummary s;
  s.ratios.assign(trials, 0.0);
  s.opt_totals.assign(trials, 0.0);
  s.opt_bounds.assign(trials, 0.0);
  kernels::for_each_index(trials, exec, [&](std::size_t t) {
    const auto inst = generate_lower_bound_instance(m, alpha, derive_seed(seed, {t, 0}), options);
    const auto res = run(algorithm, inst.instance, inst.predictions.locations, derive_seed(seed, {t, 1}),
                         RunOptions{.record_trace = false});
    s.ratios[t] = competitive_ratio(res, inst.single_center);
    s.opt_totals[t] = inst.single_center.total;
    s.opt_bounds[t] = inst.opt_bound;
  });
  for (double r : s.ratios) {
    s.mean_ratio += r;
    s.max_ratio = std::max(s.max_ratio, r);
  }
  s.mean_ratio /= static_cast<double>(trials);
  return s;
}

}  // namespace ofl
