/**
 * Pullback covers and the univariate / bivariate mapper construction.
 *
 *   M(f, U) = Nrv(f*(U))
 *
 * where f*(U) splits each preimage f^-1(U_i) into the connected components of
 * its induced epsilon-subgraph.
 */
#ifndef MAPPER_STITCH_MAPPER_HPP
#define MAPPER_STITCH_MAPPER_HPP

#include <algorithm>
#include <memory>
#include <set>
#include <span>
#include <vector>

#include "mapper_stitch/complex.hpp"
#include "mapper_stitch/cover.hpp"
#include "mapper_stitch/neighborhood.hpp"
#include "mapper_stitch/point_cloud.hpp"

namespace mapper_stitch {

inline constexpr std::size_t default_max_dim = 3;

inline std::vector<CoverElement> pullback(std::span<const double> filter_values, const Cover& cover,
                                          const NeighborhoodGraph& graph) {
  if (filter_values.size() != graph.size())
    throw SpecError("filter values do not match the point count");
  std::vector<CoverElement> out;
  for (const auto& iv : cover.intervals()) {
    std::vector<PointIndex> subset;
    for (PointIndex p = 0; p < filter_values.size(); ++p)
      if (iv.contains(filter_values[p])) subset.push_back(p);
    for (auto& comp : components(graph, subset))
      out.push_back({std::move(comp), {static_cast<int>(iv.index), no_interval}});
  }
  return out;
}

inline std::vector<CoverElement> pullback(const PointCloud& cloud, std::span<const double> filter_values,
                                          const Cover& cover, const NeighborhoodGraph& graph) {
  if (cloud.size() != graph.size()) throw SpecError("graph was built over a different cloud");
  return pullback(filter_values, cover, graph);
}

/// Pullback over rectangle cells; a point is in cell (i,j) iff a in U_i and b in V_j.
inline std::vector<CoverElement> pullback(std::span<const double> first_values,
                                          std::span<const double> second_values,
                                          const ProductCover& cover, const NeighborhoodGraph& graph) {
  if (first_values.size() != graph.size() || second_values.size() != graph.size())
    throw SpecError("filter values do not match the point count");
  std::vector<CoverElement> out;
  for (const auto& cell : cover.cells()) {
    std::vector<PointIndex> subset;
    for (PointIndex p = 0; p < first_values.size(); ++p)
      if (cover.contains(cell, first_values[p], second_values[p])) subset.push_back(p);
    for (auto& comp : components(graph, subset))
      out.push_back({std::move(comp),
                     {static_cast<int>(cell.first), static_cast<int>(cell.second)}});
  }
  return out;
}

/**
 * Nerve of a family of point sets, truncated at `max_dim`.
 *
 * A vertex set is a simplex iff its members share a point, so the nerve is
 * exactly the union over points x of all subsets of {v : x in mu(v)}. We
 * enumerate those incidence lists (deduplicated) instead of testing every
 * candidate tuple.
 */
inline MapperComplex nerve(std::vector<CoverElement> elements, std::size_t max_dim,
                           std::size_t point_count = 0) {
  if (max_dim < 1) throw SpecError("max_dim must be at least 1");
  for (const auto& e : elements) {
    if (e.members.empty()) throw SpecError("cover elements must be nonempty");
    point_count = std::max<std::size_t>(point_count, e.members.back() + 1u);
  }

  std::vector<std::vector<VertexIndex>> incidence(point_count);
  for (VertexIndex v = 0; v < elements.size(); ++v)
    for (PointIndex p : elements[v].members) incidence[p].push_back(v);
  std::set<std::vector<VertexIndex>> distinct;
  for (auto& inc : incidence)
    if (inc.size() >= 2) distinct.insert(std::move(inc));

  MapperComplex k(std::move(elements), max_dim, point_count);
  const std::size_t max_size = max_dim + 1;
  for (const auto& inc : distinct) {
    // Enumerate subsets of size 2..max_size in lexicographic order.
    const std::size_t n = inc.size();
    for (std::size_t size = 2; size <= std::min(max_size, n); ++size) {
      std::vector<std::size_t> idx(size);
      for (std::size_t t = 0; t < size; ++t) idx[t] = t;
      while (true) {
        Simplex s(size);
        for (std::size_t t = 0; t < size; ++t) s[t] = inc[idx[t]];
        k.add(std::move(s));
        std::size_t t = size;
        while (t > 0 && idx[t - 1] == n - size + (t - 1)) --t;
        if (t == 0) break;
        ++idx[t - 1];
        for (std::size_t r = t; r < size; ++r) idx[r] = idx[r - 1] + 1;
      }
    }
  }
  return k;
}

inline MapperComplex build_mapper(const PointCloud& cloud, const FilterFunction& filter,
                                  const Cover& cover, const NeighborhoodGraph& graph,
                                  std::size_t max_dim = default_max_dim) {
  auto values = std::make_shared<const std::vector<double>>(evaluate_filter(cloud, filter));
  MapperComplex k = nerve(pullback(cloud, *values, cover, graph), max_dim, cloud.size());
  k.set_lenses({{filter.label(), cover, values}});
  return k;
}

/// Builds a cover from the filter's values and then the mapper.
inline MapperComplex build_mapper(const PointCloud& cloud, const FilterFunction& filter,
                                  std::size_t n, double p, const NeighborhoodGraph& graph,
                                  std::size_t max_dim = default_max_dim) {
  auto values = evaluate_filter(cloud, filter);
  return build_mapper(cloud, filter, build_cover(values, n, p), graph, max_dim);
}

inline MapperComplex build_bivariate_mapper(const PointCloud& cloud, const FilterFunction& filter_a,
                                            const FilterFunction& filter_b,
                                            const ProductCover& cover,
                                            const NeighborhoodGraph& graph,
                                            std::size_t max_dim = default_max_dim) {
  if (cloud.size() != graph.size()) throw SpecError("graph was built over a different cloud");
  auto a = std::make_shared<const std::vector<double>>(evaluate_filter(cloud, filter_a));
  auto b = std::make_shared<const std::vector<double>>(evaluate_filter(cloud, filter_b));
  MapperComplex k = nerve(pullback(*a, *b, cover, graph), max_dim, cloud.size());
  k.set_lenses({{filter_a.label(), cover.first(), a}, {filter_b.label(), cover.second(), b}});
  return k;
}

}  // namespace mapper_stitch

#endif
