#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "ofl/error.hpp"
#include "ofl/metric.hpp"
#include "oracles.hpp"

using namespace ofl;

namespace {

struct RandomTree {
  std::vector<std::uint32_t> parent;
  std::vector<double> len;
};

RandomTree random_tree(std::size_t n, std::mt19937_64& gen) {
  RandomTree t{std::vector<std::uint32_t>(n, kNoParent), std::vector<double>(n, 0.0)};
  std::uniform_real_distribution<double> w(0.1, 5.0);
  for (std::uint32_t v = 1; v < n; ++v) {
    t.parent[v] = static_cast<std::uint32_t>(gen() % v);
    t.len[v] = w(gen);
  }
  return t;
}

}  // namespace

TEST(Distance, EuclideanIdentity) {
  const auto s = MetricSpace::euclidean(2);
  EXPECT_EQ(s.distance(point({1.7, -2}), point({1.7, -2})), 0.0);
}

TEST(Distance, EuclideanThreeFourFive) {
  const auto s = MetricSpace::euclidean(2);
  EXPECT_DOUBLE_EQ(s.distance(point({0, 0}), point({3, 4})), 5.0);
}

TEST(Distance, TreeLeavesAcrossRoot) {
  // Root 0; children 1, 2 at length 2; leaves 3, 4 under 1 and 5, 6 under 2 at length 1.
  std::vector<std::uint32_t> parent{kNoParent, 0, 0, 1, 1, 2, 2};
  std::vector<double> len{0, 2, 2, 1, 1, 1, 1};
  const auto s = MetricSpace::tree(parent, len);
  const auto g = oracle::expand(parent, len, {});
  const auto d = oracle::floyd(g.nodes, g.edges);
  EXPECT_DOUBLE_EQ(s.distance(node(3), node(5)), 6.0);
  EXPECT_DOUBLE_EQ(d[3][5], 6.0);
}

TEST(Distance, TreeNodesMatchExpandedGraph) {
  std::mt19937_64 gen(7);
  for (int rep = 0; rep < 20; ++rep) {
    const auto t = random_tree(2 + gen() % 30, gen);
    const auto s = MetricSpace::tree(t.parent, t.len);
    const auto g = oracle::expand(t.parent, t.len, {});
    const auto d = oracle::floyd(g.nodes, g.edges);
    for (std::uint32_t a = 0; a < t.parent.size(); ++a)
      for (std::uint32_t b = 0; b < t.parent.size(); ++b)
        EXPECT_NEAR(s.distance(node(a), node(b)), d[a][b], 1e-9);
  }
}

TEST(Distance, TreeEdgePointsMatchExpandedGraph) {
  std::mt19937_64 gen(11);
  for (int rep = 0; rep < 50; ++rep) {
    const auto t = random_tree(2 + gen() % 15, gen);
    const auto s = MetricSpace::tree(t.parent, t.len);
    std::vector<oracle::OnEdge> ins;
    std::vector<Location> locs;
    for (int k = 0; k < 6; ++k) {
      const auto child = static_cast<std::uint32_t>(1 + gen() % (t.parent.size() - 1));
      // Keep offsets strictly inside so the oracle graph has no zero-length edges.
      const double off = t.len[child] * (0.05 + 0.9 * std::uniform_real_distribution<double>(0, 1)(gen));
      ins.push_back({child, off});
      locs.push_back(EdgePoint{t.parent[child], child, off});
    }
    const auto g = oracle::expand(t.parent, t.len, ins);
    const auto d = oracle::floyd(g.nodes, g.edges);
    const std::size_t n = t.parent.size();
    for (std::size_t i = 0; i < locs.size(); ++i) {
      for (std::size_t j = 0; j < locs.size(); ++j)
        EXPECT_NEAR(s.distance(locs[i], locs[j]), d[n + i][n + j], 1e-9);
      for (std::uint32_t v = 0; v < n; ++v) EXPECT_NEAR(s.distance(locs[i], node(v)), d[n + i][v], 1e-9);
    }
  }
}

TEST(Distance, TriangleInequalityProperty) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-10, 10);

  const auto e = MetricSpace::euclidean(3);
  const auto t = random_tree(40, gen);
  const auto tr = MetricSpace::tree(t.parent, t.len);
  // Matrix space from random points in the plane, so it is a metric.
  const std::size_t n = 20;
  std::vector<std::vector<double>> pts(n);
  for (auto& p : pts) p = {u(gen), u(gen)};
  std::vector<double> entries(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) entries[i * n + j] = oracle::euclid(pts[i], pts[j]);
  const auto mx = MetricSpace::matrix(n, entries, TriangleCheck::Full);

  auto random_loc = [&](int kind) -> Location {
    if (kind == 0) return point({u(gen), u(gen), u(gen)});
    if (kind == 1) {
      if (gen() % 2) return node(static_cast<std::uint32_t>(gen() % 40));
      const auto c = static_cast<std::uint32_t>(1 + gen() % 39);
      return EdgePoint{t.parent[c], c, t.len[c] * std::uniform_real_distribution<double>(0, 1)(gen)};
    }
    return node(static_cast<std::uint32_t>(gen() % n));
  };
  const MetricSpace* spaces[] = {&e, &tr, &mx};
  for (int kind = 0; kind < 3; ++kind) {
    const auto& s = *spaces[kind];
    for (int rep = 0; rep < 1000; ++rep) {
      const auto a = random_loc(kind), b = random_loc(kind), c = random_loc(kind);
      EXPECT_LE(s.distance(a, c), s.distance(a, b) + s.distance(b, c) + 1e-9);
      EXPECT_EQ(s.distance(a, b), s.distance(b, a));
      EXPECT_EQ(s.distance(a, a), 0.0);
    }
  }
}

TEST(Distance, MalformedLocations) {
  const auto e = MetricSpace::euclidean(2);
  EXPECT_THROW(e.distance(point({0, 0}), point({1, 2, 3})), MalformedLocation);
  EXPECT_THROW(e.distance(point({0, 0}), node(1)), MalformedLocation);
  const auto t = MetricSpace::tree({kNoParent, 0}, {0, 2});
  EXPECT_THROW(t.distance(node(0), node(5)), MalformedLocation);
  EXPECT_THROW(t.distance(node(0), EdgePoint{0, 1, 2.5}), MalformedLocation);
  EXPECT_THROW(t.distance(node(0), EdgePoint{1, 0, 0.5}), MalformedLocation);
  EXPECT_THROW(MetricSpace().distance(node(0), node(0)), InvalidMetric);
}

TEST(Nearest, Examples) {
  const auto s = MetricSpace::euclidean(2);
  std::vector<Location> c{point({5, 0}), point({0, 1})};
  const auto hit = nearest(s, point({0, 0}), c);
  EXPECT_EQ(hit.index, 1u);
  EXPECT_EQ(hit.distance, 1.0);
  const auto same = nearest(s, point({5, 0}), c);
  EXPECT_EQ(same.index, 0u);
  EXPECT_EQ(same.distance, 0.0);
  EXPECT_THROW(nearest(s, point({0, 0}), {}), EmptyCandidates);
}

TEST(Nearest, TieGoesToLowestIndex) {
  const auto s = MetricSpace::euclidean(1);
  std::vector<Location> c{point({2}), point({-1}), point({1})};
  EXPECT_EQ(nearest(s, point({0}), c).index, 1u);
}

TEST(Nearest, MatchesLinearScan) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0, 100);
  const auto s = MetricSpace::euclidean(2);
  std::vector<std::vector<double>> raw(100);
  std::vector<Location> c;
  for (auto& p : raw) {
    p = {u(gen), u(gen)};
    c.push_back(point(p));
  }
  for (int rep = 0; rep < 200; ++rep) {
    const std::vector<double> q{u(gen), u(gen)};
    std::size_t best = 0;
    for (std::size_t i = 1; i < raw.size(); ++i)
      if (oracle::euclid(q, raw[i]) < oracle::euclid(q, raw[best])) best = i;
    const auto hit = nearest(s, point(q), c);
    EXPECT_EQ(hit.index, best);
    EXPECT_DOUBLE_EQ(hit.distance, oracle::euclid(q, raw[best]));
  }
}

TEST(MatrixSpace, Validation) {
  EXPECT_THROW(MetricSpace::matrix(2, {0, 1, 2, 0}), InvalidMetric);
  EXPECT_THROW(MetricSpace::matrix(2, {1, 1, 1, 0}), InvalidMetric);
  EXPECT_THROW(MetricSpace::matrix(2, {0, -1, -1, 0}), InvalidMetric);
  EXPECT_THROW(MetricSpace::matrix(3, {0, 1, 5, 1, 0, 1, 5, 1, 0}, TriangleCheck::Full), InvalidMetric);
  EXPECT_NO_THROW(MetricSpace::matrix(3, {0, 1, 5, 1, 0, 1, 5, 1, 0}, TriangleCheck::None));
  EXPECT_THROW(MetricSpace::matrix(2, {0, 1, 1}), InvalidMetric);
}

TEST(MatrixSpace, LoadFromText) {
  std::istringstream in("3\n0,1,2\n1,0,1\n2,1,0\n");
  const auto s = load_matrix(in, TriangleCheck::Full);
  EXPECT_EQ(s.kind(), SpaceKind::Matrix);
  EXPECT_EQ(s.distance(node(0), node(2)), 2.0);
}

TEST(TreeSpace, Validation) {
  EXPECT_THROW(MetricSpace::tree({kNoParent, kNoParent}, {0, 0}), InvalidMetric);
  EXPECT_THROW(MetricSpace::tree({kNoParent, 0}, {0, 0}), InvalidMetric);
  EXPECT_THROW(MetricSpace::tree({kNoParent, 2, 1}, {0, 1, 1}), InvalidMetric);
}

TEST(TreeSpace, PointOnPath) {
  std::vector<std::uint32_t> parent{kNoParent, 0, 0, 1, 1, 2, 2};
  std::vector<double> len{0, 2, 2, 1, 1, 1, 1};
  const auto s = MetricSpace::tree(parent, len);
  // From leaf 3 toward leaf 5: 3 -> 1 (1) -> 0 (2) -> 2 (2) -> 5 (1).
  EXPECT_EQ(s.point_on_path(node(3), node(5), 0.0), node(3));
  EXPECT_EQ(s.point_on_path(node(3), node(5), 1.0), node(1));
  EXPECT_EQ(s.point_on_path(node(3), node(5), 6.0), node(5));
  const auto mid = s.point_on_path(node(3), node(5), 4.0);
  EXPECT_NEAR(s.distance(mid, node(3)), 4.0, 1e-12);
  EXPECT_NEAR(s.distance(mid, node(5)), 2.0, 1e-12);
  const auto up = s.point_on_path(node(3), node(5), 0.5);
  EXPECT_NEAR(s.distance(up, node(3)), 0.5, 1e-12);
  EXPECT_NEAR(s.distance(up, node(1)), 0.5, 1e-12);
}

TEST(Locations, TextRoundTrip) {
  const std::vector<Location> locs{point({0.1, -3e-7, 12345.678}), node(42), EdgePoint{3, 7, 0.3333333333333333}};
  for (const auto& l : locs) EXPECT_EQ(parse_location(to_string(l)), l);
  EXPECT_THROW(parse_location("1,x"), ParseError);
  EXPECT_THROW(parse_location("e:1:2"), ParseError);
}
