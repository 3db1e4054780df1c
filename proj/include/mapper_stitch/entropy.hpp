/**
 * Graph entropies of mapper graphs (natural logarithm, 0 log 0 = 0).
 *
 * Distance entropy: the N^2 entries of the all-pairs distance matrix are
 * grouped by value (0, 1, ..., diameter, and infinity for pairs in different
 * components); H_D is the Shannon entropy of the group frequencies.
 *
 * Adjacency entropy: H_A = -sum_e q_e log q_e with q_e = w_e / W.
 */
#ifndef MAPPER_STITCH_ENTROPY_HPP
#define MAPPER_STITCH_ENTROPY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "mapper_stitch/complex.hpp"
#include "mapper_stitch/errors.hpp"

namespace mapper_stitch {

struct Graph {
  std::size_t vertex_count = 0;
  std::vector<std::pair<VertexIndex, VertexIndex>> edges;
};

inline Graph one_skeleton(const MapperComplex& k) { return {k.vertex_count(), k.edges()}; }

namespace detail {

inline double plogp(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

}  // namespace detail

/// Counts of distance values: [d] for finite d, and the unreachable count.
struct DistanceHistogram {
  std::vector<std::size_t> finite;
  std::size_t infinite = 0;
};

inline DistanceHistogram distance_histogram(const Graph& g) {
  const std::size_t n = g.vertex_count;
  std::vector<std::vector<VertexIndex>> adj(n);
  for (auto [a, b] : g.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  DistanceHistogram h;
  constexpr std::size_t unseen = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(n);
  std::vector<VertexIndex> queue;
  for (VertexIndex s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), unseen);
    dist[s] = 0;
    queue.assign(1, s);
    std::size_t reached = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      VertexIndex x = queue[head];
      ++reached;
      if (h.finite.size() <= dist[x]) h.finite.resize(dist[x] + 1, 0);
      ++h.finite[dist[x]];
      for (VertexIndex y : adj[x])
        if (dist[y] == unseen) {
          dist[y] = dist[x] + 1;
          queue.push_back(y);
        }
    }
    h.infinite += n - reached;
  }
  return h;
}

inline double entropy_distance(const Graph& g) {
  if (g.vertex_count == 0) throw SpecError("distance entropy of an empty graph is undefined");
  const auto h = distance_histogram(g);
  const double total = static_cast<double>(g.vertex_count) * static_cast<double>(g.vertex_count);
  double H = 0.0;
  for (std::size_t c : h.finite) H -= detail::plogp(static_cast<double>(c) / total);
  H -= detail::plogp(static_cast<double>(h.infinite) / total);
  return H;
}

/// `weights` is per edge (same order as g.edges); empty means all ones.
inline double entropy_adjacency(const Graph& g, std::span<const double> weights = {}) {
  if (!weights.empty() && weights.size() != g.edges.size())
    throw SpecError("one weight per edge is required");
  if (g.edges.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    double w = weights.empty() ? 1.0 : weights[e];
    if (!(w > 0.0) || !std::isfinite(w)) throw SpecError("edge weights must be positive");
    total += w;
  }
  double H = 0.0;
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    H -= detail::plogp((weights.empty() ? 1.0 : weights[e]) / total);
  return H;
}

}  // namespace mapper_stitch

#endif
