#ifndef MAPPER_STITCH_NEIGHBORHOOD_HPP
#define MAPPER_STITCH_NEIGHBORHOOD_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "mapper_stitch/errors.hpp"
#include "mapper_stitch/point_cloud.hpp"

namespace mapper_stitch {

using PointIndex = std::uint32_t;

/**
 * Undirected epsilon-graph over point indices: i ~ j iff |p_i - p_j| <= eps.
 *
 * This is the single connectivity notion for the whole library; the
 * components of any subset are the components of its induced subgraph.
 */
class NeighborhoodGraph {
 public:
  NeighborhoodGraph() = default;
  NeighborhoodGraph(double epsilon, std::vector<std::vector<PointIndex>> adjacency)
      : epsilon_(epsilon), adjacency_(std::move(adjacency)) {}

  double epsilon() const { return epsilon_; }
  std::size_t size() const { return adjacency_.size(); }
  const std::vector<PointIndex>& neighbors(PointIndex i) const { return adjacency_[i]; }

  bool adjacent(PointIndex i, PointIndex j) const {
    const auto& n = adjacency_[i];
    return std::binary_search(n.begin(), n.end(), j);
  }

  std::size_t edge_count() const {
    std::size_t total = 0;
    for (const auto& n : adjacency_) total += n.size();
    return total / 2;
  }

 private:
  double epsilon_ = 0.0;
  std::vector<std::vector<PointIndex>> adjacency_;
};

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

inline NeighborhoodGraph build_neighborhood_graph(const PointCloud& cloud, double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw SpecError("epsilon must be positive");
  const std::size_t n = cloud.size();
  const double eps2 = epsilon * epsilon;
  std::vector<std::vector<PointIndex>> adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto pi = cloud.point(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      // Compare true distances so the boundary case d == eps is inclusive
      // without squared-rounding surprises.
      double d2 = squared_distance(pi, cloud.point(j));
      if (d2 <= eps2 || std::sqrt(d2) <= epsilon) {
        adj[i].push_back(static_cast<PointIndex>(j));
        adj[j].push_back(static_cast<PointIndex>(i));
      }
    }
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return NeighborhoodGraph(epsilon, std::move(adj));
}

/// factor * mean distance to the k-th nearest neighbour (k capped at N-1).
inline double default_epsilon(const PointCloud& cloud, std::size_t k = 5, double factor = 1.5) {
  const std::size_t n = cloud.size();
  if (n < 2) return 1.0;
  k = std::min(k, n - 1);
  std::vector<double> d(n - 1);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t m = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) d[m++] = squared_distance(cloud.point(i), cloud.point(j));
    std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k - 1), d.end());
    total += std::sqrt(d[k - 1]);
  }
  double eps = factor * total / static_cast<double>(n);
  return eps > 0.0 ? eps : 1.0;
}

/**
 * Connected components of the subgraph induced by `subset`. Components are
 * sorted and the list is ordered by smallest member.
 */
inline std::vector<std::vector<PointIndex>> components(const NeighborhoodGraph& graph,
                                                       std::span<const PointIndex> subset) {
  std::vector<std::vector<PointIndex>> out;
  if (subset.empty()) return out;
  std::vector<std::uint8_t> state(graph.size(), 0);  // 0 outside, 1 unvisited, 2 visited
  for (PointIndex p : subset) state[p] = 1;
  std::vector<PointIndex> sorted(subset.begin(), subset.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<PointIndex> stack;
  for (PointIndex seed : sorted) {
    if (state[seed] != 1) continue;
    std::vector<PointIndex> comp;
    state[seed] = 2;
    stack.push_back(seed);
    while (!stack.empty()) {
      PointIndex x = stack.back();
      stack.pop_back();
      comp.push_back(x);
      for (PointIndex y : graph.neighbors(x)) {
        if (state[y] == 1) {
          state[y] = 2;
          stack.push_back(y);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

}  // namespace mapper_stitch

#endif
