#pragma once

// Metric spaces and locations.
//
// Three kinds of spaces are supported: Euclidean point clouds, explicit
// finite distance matrices and weighted rooted trees. Tree locations may sit
// in the interior of an edge (EdgePoint), which the lower-bound construction
// needs for its predictions.
//
// A MetricSpace is immutable once built; copies share the underlying data and
// may be read concurrently.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace ofl {

struct EuclideanPoint {
  std::vector<double> coords;
  bool operator==(const EuclideanPoint&) const = default;
};

/// A vertex of a finite (matrix) or tree space.
struct NodeRef {
  std::uint32_t id = 0;
  bool operator==(const NodeRef&) const = default;
};

/// A point on the tree edge parent->child, `offset` away from the parent.
struct EdgePoint {
  std::uint32_t parent = 0;
  std::uint32_t child = 0;
  double offset = 0.0;
  bool operator==(const EdgePoint&) const = default;
};

using Location = std::variant<EuclideanPoint, NodeRef, EdgePoint>;

inline Location point(std::vector<double> coords) { return EuclideanPoint{std::move(coords)}; }
inline Location node(std::uint32_t id) { return NodeRef{id}; }

std::string to_string(const Location& loc);
/// Inverse of to_string: "x,y,..." | "n:<id>" | "e:<parent>:<child>:<offset>".
Location parse_location(std::string_view text);

enum class SpaceKind { Euclidean, Matrix, Tree };

/// How thoroughly an explicit matrix is checked for the triangle inequality.
enum class TriangleCheck { Sampled, Full, None };

inline constexpr std::uint32_t kNoParent = std::numeric_limits<std::uint32_t>::max();

class MetricSpace {
 public:
  /// An empty placeholder; every query on it throws InvalidMetric.
  MetricSpace() = default;

  static MetricSpace euclidean(std::size_t dimension);

  /// `entries` is row-major n*n. Symmetry, zero diagonal and non-negativity
  /// are always checked; the triangle inequality on min(n^3, 1e5) sampled
  /// triples by default.
  static MetricSpace matrix(std::size_t n, std::vector<double> entries,
                            TriangleCheck check = TriangleCheck::Sampled,
                            std::uint64_t seed = 0);

  /// `parent[v]` is kNoParent for the single root; `edge_length[v]` is the
  /// length of the edge from parent[v] to v (ignored for the root).
  static MetricSpace tree(std::vector<std::uint32_t> parent, std::vector<double> edge_length);

  SpaceKind kind() const noexcept;
  /// Euclidean dimension, or number of vertices for finite spaces.
  std::size_t size() const noexcept;

  double distance(const Location& a, const Location& b) const;

  /// Point at distance `t` from `from` on the shortest path to `to`.
  /// Euclidean: linear interpolation. Tree: node endpoints only; the result
  /// is a NodeRef when it lands on a vertex, an EdgePoint otherwise.
  /// Matrix: only t == 0 or t == d(from, to).
  Location point_on_path(const Location& from, const Location& to, double t) const;

  /// Throws MalformedLocation if `loc` does not belong to this space.
  void validate(const Location& loc) const;

  // Tree accessors (throw UnsupportedOperation on other kinds).
  std::uint32_t parent(std::uint32_t v) const;
  double edge_length(std::uint32_t v) const;
  std::uint32_t level(std::uint32_t v) const;
  double root_distance(std::uint32_t v) const;
  bool in_subtree(std::uint32_t v, std::uint32_t root) const;
  std::span<const std::uint32_t> parents() const;
  std::span<const double> edge_lengths() const;

  // Matrix accessor.
  std::span<const double> matrix_entries() const;

  struct Data;

 private:
  explicit MetricSpace(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  const Data& data() const;
  std::shared_ptr<const Data> data_;
};

/// Free-function form of MetricSpace::distance.
inline double distance(const MetricSpace& space, const Location& a, const Location& b) {
  return space.distance(a, b);
}

struct NearestHit {
  std::size_t index = 0;
  double distance = 0.0;
};

/// Linear scan; ties go to the lowest index. Throws EmptyCandidates.
NearestHit nearest(const MetricSpace& space, const Location& query,
                   std::span<const Location> candidates);

/// Explicit matrix file: first line n, then n rows of n delimited reals.
MetricSpace load_matrix(std::istream& in, TriangleCheck check = TriangleCheck::Sampled);
MetricSpace load_matrix_file(const std::string& path, TriangleCheck check = TriangleCheck::Sampled);

}  // namespace ofl
