#include "ofl/metric.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "ofl/error.hpp"
#include "ofl/rng.hpp"
#include "ofl/text.hpp"

namespace ofl {

namespace {

struct EuclideanData {
  std::size_t dimension = 0;
};

struct MatrixData {
  std::size_t n = 0;
  std::vector<double> d;  // row-major
};

struct TreeData {
  std::vector<std::uint32_t> parent;
  std::vector<double> length;
  std::vector<std::uint32_t> level;
  std::vector<double> root_dist;
};

}  // namespace

struct MetricSpace::Data {
  std::variant<EuclideanData, MatrixData, TreeData> impl;
};

namespace {

const TreeData& tree_of(const MetricSpace::Data& data) {
  if (const auto* t = std::get_if<TreeData>(&data.impl)) return *t;
  throw UnsupportedOperation("operation requires a weighted tree space");
}

// --- tree helpers -----------------------------------------------------------

bool tree_in_subtree(const TreeData& t, std::uint32_t v, std::uint32_t root) {
  while (t.level[v] > t.level[root]) v = t.parent[v];
  return v == root;
}

std::uint32_t tree_lca(const TreeData& t, std::uint32_t u, std::uint32_t v) {
  while (t.level[u] > t.level[v]) u = t.parent[u];
  while (t.level[v] > t.level[u]) v = t.parent[v];
  while (u != v) {
    u = t.parent[u];
    v = t.parent[v];
  }
  return u;
}

double tree_node_distance(const TreeData& t, std::uint32_t u, std::uint32_t v) {
  if (u == v) return 0.0;
  const auto a = tree_lca(t, u, v);
  return (t.root_dist[u] - t.root_dist[a]) + (t.root_dist[v] - t.root_dist[a]);
}

// Distance from vertex u to an edge point.
double tree_node_edge(const TreeData& t, std::uint32_t u, const EdgePoint& e) {
  const double len = t.length[e.child];
  if (tree_in_subtree(t, u, e.child)) return (len - e.offset) + tree_node_distance(t, u, e.child);
  return e.offset + tree_node_distance(t, u, e.parent);
}

// True if location q lies strictly below vertex c (in c's subtree, not on the
// edge above c).
bool tree_below(const TreeData& t, const Location& q, std::uint32_t c) {
  if (const auto* n = std::get_if<NodeRef>(&q)) return tree_in_subtree(t, n->id, c);
  const auto& e = std::get<EdgePoint>(q);
  return e.child != c && tree_in_subtree(t, e.child, c);
}

double tree_distance(const TreeData& t, const Location& a, const Location& b) {
  const auto* na = std::get_if<NodeRef>(&a);
  const auto* nb = std::get_if<NodeRef>(&b);
  if (na && nb) return tree_node_distance(t, na->id, nb->id);
  if (na) return tree_node_edge(t, na->id, std::get<EdgePoint>(b));
  if (nb) return tree_node_edge(t, nb->id, std::get<EdgePoint>(a));
  // Evaluate from a fixed endpoint so d(a, b) and d(b, a) round identically.
  const bool swap = std::get<EdgePoint>(b).child < std::get<EdgePoint>(a).child;
  const auto& ea = std::get<EdgePoint>(swap ? b : a);
  const auto& eb = std::get<EdgePoint>(swap ? a : b);
  if (ea.child == eb.child) return std::abs(ea.offset - eb.offset);
  const double len = t.length[ea.child];
  if (tree_below(t, swap ? a : b, ea.child)) return (len - ea.offset) + tree_node_edge(t, ea.child, eb);
  return ea.offset + tree_node_edge(t, ea.parent, eb);
}

// Location `t` above vertex w along its ancestor chain.
Location tree_walk_up(const TreeData& tree, std::uint32_t w, double t) {
  while (true) {
    if (t <= 0.0 || tree.parent[w] == kNoParent) return NodeRef{w};
    const double len = tree.length[w];
    if (t < len) return EdgePoint{tree.parent[w], w, len - t};
    t -= len;
    w = tree.parent[w];
  }
}

double euclid(const EuclideanPoint& a, const EuclideanPoint& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.coords.size(); ++i) {
    const double d = a.coords[i] - b.coords[i];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

// --- construction -----------------------------------------------------------

MetricSpace MetricSpace::euclidean(std::size_t dimension) {
  if (dimension == 0) throw InvalidMetric("euclidean space needs dimension >= 1");
  return MetricSpace(std::make_shared<const Data>(Data{EuclideanData{dimension}}));
}

MetricSpace MetricSpace::matrix(std::size_t n, std::vector<double> entries, TriangleCheck check,
                                std::uint64_t seed) {
  if (n == 0) throw InvalidMetric("matrix space needs n >= 1");
  if (entries.size() != n * n) throw InvalidMetric("matrix space: expected n*n entries");
  auto at = [&](std::size_t i, std::size_t j) { return entries[i * n + j]; };
  for (std::size_t i = 0; i < n; ++i) {
    if (at(i, i) != 0.0) throw InvalidMetric("matrix space: non-zero diagonal at " + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) {
      const double v = at(i, j);
      if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidMetric("matrix space: negative or non-finite entry");
      if (v != at(j, i)) throw InvalidMetric("matrix space: not symmetric");
    }
  }
  auto violates = [&](std::size_t a, std::size_t b, std::size_t c) {
    const double via = at(a, b) + at(b, c);
    return at(a, c) > via + 1e-9 * std::max(1.0, via);
  };
  const double cube = static_cast<double>(n) * n * n;
  if (check == TriangleCheck::Full || (check == TriangleCheck::Sampled && cube <= 1e5)) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          if (violates(a, b, c)) throw InvalidMetric("matrix space: triangle inequality violated");
  } else if (check == TriangleCheck::Sampled) {
    Rng rng(seed);
    for (int s = 0; s < 100000; ++s) {
      const auto a = rng.bits() % n, b = rng.bits() % n, c = rng.bits() % n;
      if (violates(a, b, c)) throw InvalidMetric("matrix space: triangle inequality violated");
    }
  }
  return MetricSpace(std::make_shared<const Data>(Data{MatrixData{n, std::move(entries)}}));
}

MetricSpace MetricSpace::tree(std::vector<std::uint32_t> parent, std::vector<double> edge_length) {
  const std::size_t n = parent.size();
  if (n == 0) throw InvalidMetric("tree needs at least one vertex");
  if (edge_length.size() != n) throw InvalidMetric("tree: parent and edge_length sizes differ");
  if (n >= kNoParent) throw InvalidMetric("tree: too many vertices");

  std::size_t roots = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (parent[v] == kNoParent) {
      ++roots;
      edge_length[v] = 0.0;
    } else if (parent[v] >= n) {
      throw InvalidMetric("tree: parent id out of range at vertex " + std::to_string(v));
    } else if (!(edge_length[v] > 0.0) || !std::isfinite(edge_length[v])) {
      throw InvalidMetric("tree: edge lengths must be positive and finite");
    }
  }
  if (roots != 1) throw InvalidMetric("tree: expected exactly one root");

  // Levels by memoized ancestor walks; a walk longer than n means a cycle.
  constexpr std::uint32_t kUnset = kNoParent;
  std::vector<std::uint32_t> level(n, kUnset);
  std::vector<double> root_dist(n, 0.0);
  std::vector<std::uint32_t> chain;
  for (std::uint32_t v = 0; v < n; ++v) {
    chain.clear();
    std::uint32_t w = v;
    while (level[w] == kUnset && parent[w] != kNoParent) {
      chain.push_back(w);
      if (chain.size() > n) throw InvalidMetric("tree: parent links contain a cycle");
      w = parent[w];
    }
    if (level[w] == kUnset) {  // root
      level[w] = 0;
      root_dist[w] = 0.0;
    }
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      level[*it] = level[parent[*it]] + 1;
      root_dist[*it] = root_dist[parent[*it]] + edge_length[*it];
    }
  }
  return MetricSpace(std::make_shared<const Data>(
      Data{TreeData{std::move(parent), std::move(edge_length), std::move(level), std::move(root_dist)}}));
}

const MetricSpace::Data& MetricSpace::data() const {
  if (!data_) throw InvalidMetric("uninitialized metric space");
  return *data_;
}

SpaceKind MetricSpace::kind() const noexcept {
  if (!data_) return SpaceKind::Euclidean;
  switch (data().impl.index()) {
    case 0: return SpaceKind::Euclidean;
    case 1: return SpaceKind::Matrix;
    default: return SpaceKind::Tree;
  }
}

std::size_t MetricSpace::size() const noexcept {
  if (!data_) return 0;
  return std::visit(
      [](const auto& d) -> std::size_t {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, EuclideanData>) return d.dimension;
        else if constexpr (std::is_same_v<T, MatrixData>) return d.n;
        else return d.parent.size();
      },
      data().impl);
}

// --- validation / distance ----------------------------------------------------

void MetricSpace::validate(const Location& loc) const {
  if (const auto* e = std::get_if<EuclideanData>(&data().impl)) {
    const auto* p = std::get_if<EuclideanPoint>(&loc);
    if (!p) throw MalformedLocation("euclidean space expects coordinate points");
    if (p->coords.size() != e->dimension)
      throw MalformedLocation("dimension mismatch: expected " + std::to_string(e->dimension) + ", got " +
                              std::to_string(p->coords.size()));
    return;
  }
  if (const auto* m = std::get_if<MatrixData>(&data().impl)) {
    const auto* r = std::get_if<NodeRef>(&loc);
    if (!r) throw MalformedLocation("matrix space expects node references");
    if (r->id >= m->n) throw MalformedLocation("unknown node id " + std::to_string(r->id));
    return;
  }
  const auto& t = std::get<TreeData>(data().impl);
  if (const auto* r = std::get_if<NodeRef>(&loc)) {
    if (r->id >= t.parent.size()) throw MalformedLocation("unknown node id " + std::to_string(r->id));
    return;
  }
  const auto* e = std::get_if<EdgePoint>(&loc);
  if (!e) throw MalformedLocation("tree space expects node references or edge points");
  if (e->child >= t.parent.size() || t.parent[e->child] != e->parent)
    throw MalformedLocation("edge point does not name a tree edge");
  if (!(e->offset >= 0.0 && e->offset <= t.length[e->child]))
    throw MalformedLocation("edge point offset out of edge range");
}

double MetricSpace::distance(const Location& a, const Location& b) const {
  validate(a);
  validate(b);
  if (std::holds_alternative<EuclideanData>(data().impl))
    return euclid(std::get<EuclideanPoint>(a), std::get<EuclideanPoint>(b));
  if (const auto* m = std::get_if<MatrixData>(&data().impl))
    return m->d[std::get<NodeRef>(a).id * m->n + std::get<NodeRef>(b).id];
  return tree_distance(std::get<TreeData>(data().impl), a, b);
}

Location MetricSpace::point_on_path(const Location& from, const Location& to, double t) const {
  validate(from);
  validate(to);
  const double total = distance(from, to);
  if (!(t >= 0.0 && t <= total)) throw InvalidArgument("point_on_path: t outside [0, d(from,to)]");
  if (t == 0.0) return from;
  if (t == total) return to;

  if (std::holds_alternative<EuclideanData>(data().impl)) {
    const auto& a = std::get<EuclideanPoint>(from).coords;
    const auto& b = std::get<EuclideanPoint>(to).coords;
    const double s = t / total;
    EuclideanPoint p;
    p.coords.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) p.coords[i] = a[i] + s * (b[i] - a[i]);
    return p;
  }
  if (std::holds_alternative<MatrixData>(data().impl))
    throw UnsupportedOperation("matrix spaces have no interior path points");

  const auto& tree = std::get<TreeData>(data().impl);
  const auto* u = std::get_if<NodeRef>(&from);
  const auto* v = std::get_if<NodeRef>(&to);
  if (!u || !v) throw UnsupportedOperation("tree path queries need vertex endpoints");
  const auto a = tree_lca(tree, u->id, v->id);
  const double up = tree.root_dist[u->id] - tree.root_dist[a];
  if (t <= up) return tree_walk_up(tree, u->id, t);
  return tree_walk_up(tree, v->id, total - t);
}

std::uint32_t MetricSpace::parent(std::uint32_t v) const { return tree_of(data()).parent.at(v); }
double MetricSpace::edge_length(std::uint32_t v) const { return tree_of(data()).length.at(v); }
std::uint32_t MetricSpace::level(std::uint32_t v) const { return tree_of(data()).level.at(v); }
double MetricSpace::root_distance(std::uint32_t v) const { return tree_of(data()).root_dist.at(v); }
bool MetricSpace::in_subtree(std::uint32_t v, std::uint32_t root) const {
  const auto& t = tree_of(data());
  if (v >= t.parent.size() || root >= t.parent.size()) throw MalformedLocation("unknown node id");
  return tree_in_subtree(t, v, root);
}
std::span<const std::uint32_t> MetricSpace::parents() const { return tree_of(data()).parent; }
std::span<const double> MetricSpace::edge_lengths() const { return tree_of(data()).length; }

std::span<const double> MetricSpace::matrix_entries() const {
  if (const auto* m = std::get_if<MatrixData>(&data().impl)) return m->d;
  throw UnsupportedOperation("operation requires a matrix space");
}

// --- queries ------------------------------------------------------------------

NearestHit nearest(const MetricSpace& space, const Location& query, std::span<const Location> candidates) {
  if (candidates.empty()) throw EmptyCandidates();
  NearestHit best{0, space.distance(query, candidates[0])};
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double d = space.distance(query, candidates[i]);
    if (d < best.distance) best = {i, d};
  }
  return best;
}

// --- text forms ---------------------------------------------------------------

std::string to_string(const Location& loc) {
  if (const auto* p = std::get_if<EuclideanPoint>(&loc)) {
    std::string s;
    for (std::size_t i = 0; i < p->coords.size(); ++i) {
      if (i) s += ',';
      s += text::format_double(p->coords[i]);
    }
    return s;
  }
  if (const auto* n = std::get_if<NodeRef>(&loc)) return "n:" + std::to_string(n->id);
  const auto& e = std::get<EdgePoint>(loc);
  return "e:" + std::to_string(e.parent) + ":" + std::to_string(e.child) + ":" + text::format_double(e.offset);
}

Location parse_location(std::string_view s) {
  s = text::trim(s);
  if (s.empty()) throw ParseError("empty location");
  auto id_of = [&](std::string_view f) {
    const auto v = text::parse_int(f);
    if (!v || *v < 0 || *v >= static_cast<long long>(kNoParent)) throw ParseError("bad node id in location");
    return static_cast<std::uint32_t>(*v);
  };
  if (s.starts_with("n:")) return NodeRef{id_of(s.substr(2))};
  if (s.starts_with("e:")) {
    const auto f = text::split(s.substr(2), ':');
    if (f.size() != 3) throw ParseError("edge point needs parent:child:offset");
    const auto off = text::parse_double(f[2]);
    if (!off) throw ParseError("bad edge offset");
    return EdgePoint{id_of(f[0]), id_of(f[1]), *off};
  }
  EuclideanPoint p;
  for (auto f : text::split(s, ',')) {
    const auto v = text::parse_double(f);
    if (!v) throw ParseError("bad coordinate '" + std::string(f) + "'");
    p.coords.push_back(*v);
  }
  return p;
}

MetricSpace load_matrix(std::istream& in, TriangleCheck check) {
  std::string line;
  std::optional<long long> n;
  while (std::getline(in, line)) {
    if (text::trim(line).empty()) continue;
    n = text::parse_int(line);
    break;
  }
  if (!n || *n <= 0) throw ParseError("matrix file: first line must be a positive n");
  const auto size = static_cast<std::size_t>(*n);
  std::vector<double> entries;
  entries.reserve(size * size);
  std::size_t rows = 0;
  while (rows < size && std::getline(in, line)) {
    if (text::trim(line).empty()) continue;
    const auto fields = text::split(line, text::detect_delimiter(line));
    if (fields.size() != size) throw ParseError("matrix file: row " + std::to_string(rows) + " has wrong length");
    for (auto f : fields) {
      const auto v = text::parse_double(f);
      if (!v) throw ParseError("matrix file: non-numeric entry '" + std::string(f) + "'");
      entries.push_back(*v);
    }
    ++rows;
  }
  if (rows != size) throw ParseError("matrix file: expected " + std::to_string(size) + " rows");
  return MetricSpace::matrix(size, std::move(entries), check);
}

MetricSpace load_matrix_file(const std::string& path, TriangleCheck check) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return load_matrix(in, check);
}

}  // namespace ofl
