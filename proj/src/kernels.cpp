#include "ofl/kernels.hpp"

#include <algorithm>
#include <bit>
#include <limits>

#include "ofl/error.hpp"

namespace ofl::kernels {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double subset_cost(const DistanceMatrix& dm, double f, std::uint64_t mask) {
  double cost = f * std::popcount(mask);
  for (std::size_t x = 0; x < dm.n; ++x) {
    const auto row = dm.row(x);
    double best = kInf;
    for (std::uint64_t m = mask; m; m &= m - 1) {
      const double d = row[std::countr_zero(m)];
      if (d < best) best = d;
    }
    cost += best;
  }
  return cost;
}

bool better(const SubsetBest& a, const SubsetBest& b) {
  return a.cost < b.cost || (a.cost == b.cost && a.mask < b.mask);
}
}  // namespace

DistanceMatrix pairwise_distances(const MetricSpace& space, std::span<const Location> locs, Exec exec) {
  DistanceMatrix dm;
  dm.n = locs.size();
  dm.d.assign(dm.n * dm.n, 0.0);
  // Upper triangle only, mirrored, so d(i,j) and d(j,i) are the same bits.
  for_each_index(dm.n, exec, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < dm.n; ++j) {
      const double v = space.distance(locs[i], locs[j]);
      dm.d[i * dm.n + j] = v;
      dm.d[j * dm.n + i] = v;
    }
  });
  return dm;
}

double max_entry(const DistanceMatrix& dm, Exec exec) {
  std::vector<double> row_max(dm.n, 0.0);
  for_each_index(dm.n, exec, [&](std::size_t i) {
    const auto r = dm.row(i);
    row_max[i] = r.empty() ? 0.0 : *std::max_element(r.begin(), r.end());
  });
  double m = 0.0;
  for (double v : row_max) m = std::max(m, v);
  return m;
}

SubsetBest best_subset(const DistanceMatrix& dm, double facility_cost, Exec exec) {
  if (dm.n == 0) throw InvalidArgument("best_subset: no candidates");
  if (dm.n > 30) throw InstanceTooLarge("best_subset: more than 30 candidates");
  const std::uint64_t last = (std::uint64_t{1} << dm.n) - 1;

  if (exec == Exec::Serial) {
    SubsetBest best{1, subset_cost(dm, facility_cost, 1)};
    for (std::uint64_t mask = 2; mask <= last; ++mask) {
      const SubsetBest cand{mask, subset_cost(dm, facility_cost, mask)};
      if (better(cand, best)) best = cand;
    }
    return best;
  }

  // Fixed chunking so the combine order does not depend on scheduling.
  constexpr std::uint64_t kChunk = 1024;
  const std::uint64_t chunks = (last + kChunk - 1) / kChunk;
  std::vector<SubsetBest> partial(chunks, SubsetBest{0, kInf});
  for_each_index(chunks, Exec::Parallel, [&](std::size_t c) {
    const std::uint64_t lo = std::max<std::uint64_t>(1, c * kChunk);
    const std::uint64_t hi = std::min(last, (c + 1) * kChunk - 1);
    SubsetBest best{0, kInf};
    for (std::uint64_t mask = lo; mask <= hi; ++mask) {
      const SubsetBest cand{mask, subset_cost(dm, facility_cost, mask)};
      if (best.mask == 0 || better(cand, best)) best = cand;
    }
    partial[c] = best;
  });
  SubsetBest best = partial.front();
  for (const auto& p : partial)
    if (p.mask != 0 && better(p, best)) best = p;
  return best;
}

CenterCache build_center_cache(const DistanceMatrix& dm, std::span<const std::size_t> centers, Exec exec) {
  CenterCache cache;
  cache.d1.assign(dm.n, kInf);
  cache.d2.assign(dm.n, kInf);
  cache.c1.assign(dm.n, 0);
  for_each_index(dm.n, exec, [&](std::size_t x) {
    double d1 = kInf, d2 = kInf;
    std::uint32_t c1 = 0;
    for (std::size_t c = 0; c < centers.size(); ++c) {
      const double d = dm(x, centers[c]);
      if (d < d1) {
        d2 = d1;
        d1 = d;
        c1 = static_cast<std::uint32_t>(c);
      } else if (d < d2) {
        d2 = d;
      }
    }
    cache.d1[x] = d1;
    cache.d2[x] = d2;
    cache.c1[x] = c1;
  });
  return cache;
}

MoveCosts evaluate_moves(const DistanceMatrix& dm, std::span<const std::size_t> centers,
                         std::span<const std::size_t> candidates, const CenterCache& cache,
                         double facility_cost, Exec exec) {
  const std::size_t k = centers.size();
  const std::size_t n = dm.n;
  MoveCosts out;
  out.add.assign(candidates.size(), kInf);
  out.swap.assign(candidates.size() * k, kInf);
  out.drop.assign(k, kInf);

  double assigned = 0.0;
  for (std::size_t x = 0; x < n; ++x) assigned += cache.d1[x];

  if (k > 1) {
    std::vector<double> delta(k, 0.0);
    for (std::size_t x = 0; x < n; ++x) delta[cache.c1[x]] += cache.d2[x] - cache.d1[x];
    for (std::size_t c = 0; c < k; ++c) out.drop[c] = facility_cost * static_cast<double>(k - 1) + (assigned + delta[c]);
  }

  for_each_index(candidates.size(), exec, [&](std::size_t jpos) {
    const std::size_t j = candidates[jpos];
    std::vector<double> delta(k, 0.0);
    double base = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      const double dj = dm(x, j);
      const double keep = std::min(dj, cache.d1[x]);
      base += keep;
      delta[cache.c1[x]] += std::min(dj, cache.d2[x]) - keep;
    }
    out.add[jpos] = facility_cost * static_cast<double>(k + 1) + base;
    for (std::size_t c = 0; c < k; ++c)
      out.swap[jpos * k + c] = facility_cost * static_cast<double>(k) + (base + delta[c]);
  });
  return out;
}

}  // namespace ofl::kernels
