#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ofl/adversary.hpp"
#include "ofl/error.hpp"
#include "oracles.hpp"

using namespace ofl;

TEST(Rational, ParseAndReduce) {
  EXPECT_EQ(Rational::parse("2/4").str(), "1/2");
  EXPECT_EQ(Rational::parse("3").str(), "3");
  EXPECT_EQ(Rational::parse("6/3").str(), "2");
  EXPECT_THROW(Rational::parse("1/0"), ParseError);
  EXPECT_THROW(Rational::parse("x"), ParseError);
}

TEST(Hst, Levels) {
  EXPECT_EQ(hst_levels(2, {1, 1}), 2);
  EXPECT_EQ(hst_levels(2, {2, 1}), 4);
  EXPECT_EQ(hst_levels(4, {1, 2}), 2);
  EXPECT_THROW(hst_levels(1, {1, 1}), InvalidArgument);
  EXPECT_THROW(hst_levels(3, {1, 2}), InvalidArgument);
  EXPECT_THROW(hst_levels(2, {0, 1}), InvalidArgument);
}

TEST(Hst, EdgeLengthsAndLeafDistance) {
  const auto t = build_hst(2, {1, 1});
  ASSERT_EQ(t.size(), 7u);
  EXPECT_DOUBLE_EQ(t.edge_length(1), 2.0);
  EXPECT_DOUBLE_EQ(t.edge_length(3), 1.0);
  EXPECT_DOUBLE_EQ(t.distance(node(3), node(6)), 6.0);
  const auto p = t.parents();
  const auto l = t.edge_lengths();
  const auto g = oracle::expand({p.begin(), p.end()}, {l.begin(), l.end()}, {});
  EXPECT_DOUBLE_EQ(oracle::floyd(g.nodes, g.edges)[3][6], 6.0);
}

TEST(Hst, NodeBudget) {
  HstOptions small;
  small.node_budget = 100;
  EXPECT_THROW(build_hst(2, {4, 1}, small), InstanceTooLarge);
}

TEST(Hst, SubtreeDistanceProperties) {
  const int m = 2;
  const Rational alpha{2, 1};
  const double a = alpha.value();
  const auto t = build_hst(m, alpha);
  const int lambda = hst_levels(m, alpha);
  std::mt19937_64 gen(1);
  for (int rep = 0; rep < 2000; ++rep) {
    const auto v = static_cast<std::uint32_t>(gen() % t.size());
    const auto w = static_cast<std::uint32_t>(gen() % t.size());
    const int i = static_cast<int>(t.level(v));
    const double d = t.distance(node(v), node(w));
    if (t.in_subtree(w, v)) {
      EXPECT_LE(d, std::pow(m, lambda - i) / (a * (m - 1)) + 1e-9);
    } else {
      EXPECT_GE(d, std::pow(m, lambda - i) / a - 1e-9);
    }
  }
}

TEST(LowerBound, SmallInstanceShape) {
  const auto h = generate_lower_bound_instance(2, {1, 1}, 5);
  EXPECT_EQ(h.lambda, 2);
  EXPECT_EQ(h.instance.size(), 7u);
  EXPECT_EQ(h.phase_sizes, (std::vector<std::size_t>{1, 2, 4}));
  EXPECT_DOUBLE_EQ(h.facility_cost, 4.0);
  EXPECT_EQ(h.path.size(), 3u);
  EXPECT_EQ(h.path[0], 0u);
  for (std::size_t i = 1; i < h.path.size(); ++i) EXPECT_EQ(h.tree.parent(h.path[i]), h.path[i - 1]);
  EXPECT_LE(h.single_center.total, h.opt_bound + 1e-9);
  EXPECT_DOUBLE_EQ(h.opt_bound, 16.0);
}

TEST(LowerBound, PhaseCountsMatchClosedForm) {
  for (auto [m, num, den] : {std::tuple{2, 1, 2}, std::tuple{2, 1, 1}, std::tuple{4, 1, 2}, std::tuple{3, 1, 1}}) {
    const Rational alpha{num, den};
    const auto h = generate_lower_bound_instance(m, alpha, 3);
    const double a = alpha.value();
    for (int i = 0; i <= h.lambda; ++i) EXPECT_EQ(h.phase_sizes[i], std::llround(std::pow(m, i) / a));
    const double closed = (std::pow(m, h.lambda + 1) - 1) / (a * (m - 1));
    EXPECT_EQ(static_cast<double>(h.instance.size()), closed);
    EXPECT_LE(h.single_center.total, h.opt_bound + 1e-9);
  }
}

TEST(LowerBound, PredictionsRevealNextSubtree) {
  // With alpha < 1 the point alpha * d(v_i, v_lambda) lies strictly inside
  // the edge (v_i, v_{i+1}); at alpha >= 1 it is clamped onto v_i.
  for (auto [m, num, den] : {std::tuple{2, 1, 2}, std::tuple{4, 1, 4}, std::tuple{4, 1, 2}, std::tuple{8, 1, 2}}) {
    const auto h = generate_lower_bound_instance(m, {num, den}, 7);
    const auto& t = h.tree;
    std::size_t k = 0;
    for (int i = 0; i <= h.lambda; ++i) {
      const Location vi = NodeRef{h.path[i]};
      for (std::size_t j = 0; j < h.phase_sizes[i]; ++j, ++k) {
        const auto& p = h.predictions.locations[k];
        if (i == h.lambda) {
          EXPECT_EQ(p, vi);
          continue;
        }
        const Location next = NodeRef{h.path[i + 1]};
        EXPECT_LT(t.distance(p, next), t.distance(vi, next));
        EXPECT_NEAR(t.distance(vi, p) + t.distance(p, next), t.distance(vi, next), 1e-9);
      }
    }
    EXPECT_NEAR(h.declared_eta1, compute_errors(h.instance, h.single_center, h.predictions.locations).eta1, 1e-9);
  }
}

TEST(LowerBound, LargeAlphaClampsToPhaseVertex) {
  const auto h = generate_lower_bound_instance(2, {2, 1}, 1);
  EXPECT_EQ(h.demand_multiplier, 2);
  std::size_t k = 0;
  for (int i = 0; i <= h.lambda; ++i)
    for (std::size_t j = 0; j < h.phase_sizes[i]; ++j, ++k)
      EXPECT_EQ(h.predictions.locations[k], h.instance.demands[k]);
}

TEST(LowerBound, LazyTreeMatchesFullTree) {
  HstOptions lazy;
  lazy.max_full_depth = 0;
  const auto full = generate_lower_bound_instance(2, {1, 1}, 11);
  const auto part = generate_lower_bound_instance(2, {1, 1}, 11, lazy);
  EXPECT_FALSE(part.full_tree);
  EXPECT_DOUBLE_EQ(full.single_center.total, part.single_center.total);
  EXPECT_DOUBLE_EQ(full.declared_eta1, part.declared_eta1);
  const auto a = run(Algorithm::Meyerson, full.instance, {}, 3);
  const auto b = run(Algorithm::Meyerson, part.instance, {}, 3);
  EXPECT_EQ(a.total, b.total);
}

TEST(LowerBound, Deterministic) {
  const auto a = generate_lower_bound_instance(2, {1, 2}, 42);
  const auto b = generate_lower_bound_instance(2, {1, 2}, 42);
  EXPECT_EQ(a.path, b.path);
  EXPECT_EQ(a.predictions.locations, b.predictions.locations);
}

TEST(AdversarialRatio, SummaryAndExactOpt) {
  const auto s = measure_adversarial_ratio(2, {1, 1}, Algorithm::Meyerson, 5, 1);
  ASSERT_EQ(s.ratios.size(), 5u);
  for (std::size_t t = 0; t < 5; ++t) EXPECT_LE(s.opt_totals[t], s.opt_bounds[t] + 1e-9);
  EXPECT_LE(s.mean_ratio, s.max_ratio);
  // On a 7-node tree the true OPT is computable; the algorithm cannot beat it.
  const auto h = generate_lower_bound_instance(2, {1, 1}, 1);
  Instance nodes = h.instance;
  OfflineSolution best;
  best.total = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask < (1u << 7); ++mask) {
    std::vector<Location> centers;
    for (std::uint32_t v = 0; v < 7; ++v)
      if (mask >> v & 1) centers.push_back(node(v));
    const auto sol = assign_to_centers(nodes, centers);
    if (sol.total < best.total) best = sol;
  }
  for (int seed = 0; seed < 20; ++seed) {
    const auto r = run(Algorithm::Meyerson, h.instance, {}, seed);
    EXPECT_GE(competitive_ratio(r, best), 1.0 - 1e-9);
  }
}
