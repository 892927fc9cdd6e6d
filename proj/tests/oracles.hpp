#pragma once

// Independent reference computations used as test oracles. Nothing here
// calls into the library's distance or solver code paths except through
// plain coordinates and explicit edge lists.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

namespace oracle {

inline double euclid(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// All-pairs shortest paths on an explicit undirected weighted graph.
inline std::vector<std::vector<double>> floyd(std::size_t n,
                                              const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (auto [a, b, w] : edges) {
    d[a][b] = std::min(d[a][b], w);
    d[b][a] = std::min(d[b][a], w);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  return d;
}

// A tree given by parent links, with extra vertices inserted on edges.
// Returns the expanded graph's node count and edges; inserted points get ids
// n, n+1, ... in the order given.
struct ExpandedTree {
  std::size_t nodes = 0;
  std::vector<std::tuple<std::size_t, std::size_t, double>> edges;
};

struct OnEdge {
  std::uint32_t child;
  double offset;  // from the parent
};

inline ExpandedTree expand(const std::vector<std::uint32_t>& parent, const std::vector<double>& len,
                           const std::vector<OnEdge>& inserted) {
  ExpandedTree g;
  const std::size_t n = parent.size();
  g.nodes = n + inserted.size();
  std::map<std::uint32_t, std::vector<std::pair<double, std::size_t>>> by_edge;
  for (std::size_t i = 0; i < inserted.size(); ++i) by_edge[inserted[i].child].push_back({inserted[i].offset, n + i});
  for (std::uint32_t v = 0; v < n; ++v) {
    if (parent[v] == std::numeric_limits<std::uint32_t>::max()) continue;
    auto pts = by_edge[v];
    std::sort(pts.begin(), pts.end());
    std::size_t prev = parent[v];
    double prev_off = 0;
    for (auto [off, id] : pts) {
      g.edges.emplace_back(prev, id, off - prev_off);
      prev = id;
      prev_off = off;
    }
    g.edges.emplace_back(prev, v, len[v] - prev_off);
  }
  return g;
}

// Uncapacitated facility location by brute force over all non-empty subsets
// of demand positions, on an explicit distance matrix.
struct BruteSolution {
  double total = std::numeric_limits<double>::infinity();
  std::uint64_t mask = 0;
};

inline BruteSolution brute_force_ufl(const std::vector<std::vector<double>>& d, double f) {
  const std::size_t n = d.size();
  BruteSolution best;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    double cost = f * std::popcount(mask);
    for (std::size_t i = 0; i < n; ++i) {
      double m = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < n; ++j)
        if (mask >> j & 1) m = std::min(m, d[i][j]);
      cost += m;
    }
    if (cost < best.total) best = {cost, mask};
  }
  return best;
}

}  // namespace oracle
