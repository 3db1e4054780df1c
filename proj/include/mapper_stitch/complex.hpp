/**
 * Cover elements and mapper complexes.
 *
 * A MapperComplex stores its vertices (cover elements) and every simplex,
 * 0-simplices included, as a sorted vector of vertex indices. The set is
 * kept downward closed by the builders.
 */
#ifndef MAPPER_STITCH_COMPLEX_HPP
#define MAPPER_STITCH_COMPLEX_HPP

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "mapper_stitch/cover.hpp"
#include "mapper_stitch/neighborhood.hpp"

namespace mapper_stitch {

using VertexIndex = std::uint32_t;
using Simplex = std::vector<VertexIndex>;

inline constexpr int no_interval = -1;

/// Interval indices a cover element came from; `second` is -1 for univariate.
struct Origin {
  int first = no_interval;
  int second = no_interval;

  int factor(std::size_t f) const { return f == 0 ? first : second; }
  auto operator<=>(const Origin&) const = default;
};

struct CoverElement {
  std::vector<PointIndex> members;  // sorted, nonempty
  Origin origin;
  // Parent vertices in the two input mappers, set only for composed elements.
  int parent_first = -1;
  int parent_second = -1;

  PointIndex smallest() const { return members.front(); }
};

/// FNV-1a over the sorted member list.
inline std::uint64_t member_hash(std::span<const PointIndex> members) {
  std::uint64_t h = 1469598103934665603ULL;
  for (PointIndex p : members) {
    for (int b = 0; b < 4; ++b) {
      h ^= (p >> (8 * b)) & 0xFFu;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

inline bool sorted_sets_intersect(std::span<const PointIndex> a, std::span<const PointIndex> b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j)
      ++i;
    else if (*j < *i)
      ++j;
    else
      return true;
  }
  return false;
}

inline std::vector<PointIndex> sorted_intersection(std::span<const PointIndex> a,
                                                   std::span<const PointIndex> b) {
  std::vector<PointIndex> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool is_subset(std::span<const PointIndex> inner, std::span<const PointIndex> outer) {
  return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

/// Filter values and cover for one factor of a mapper.
struct Lens {
  std::string label;
  Cover cover;
  std::shared_ptr<const std::vector<double>> values;
};

class MapperComplex {
 public:
  MapperComplex() = default;
  MapperComplex(std::vector<CoverElement> vertices, std::size_t max_dim, std::size_t point_count,
                std::vector<Lens> lenses = {})
      : vertices_(std::move(vertices)),
        max_dim_(max_dim),
        point_count_(point_count),
        lenses_(std::move(lenses)) {
    for (VertexIndex v = 0; v < vertices_.size(); ++v) simplices_.insert({v});
  }

  const std::vector<CoverElement>& vertices() const { return vertices_; }
  const CoverElement& vertex(VertexIndex v) const { return vertices_[v]; }
  std::size_t vertex_count() const { return vertices_.size(); }
  const std::set<Simplex>& simplices() const { return simplices_; }
  std::size_t max_dim() const { return max_dim_; }
  std::size_t point_count() const { return point_count_; }
  const std::vector<Lens>& lenses() const { return lenses_; }
  void set_lenses(std::vector<Lens> lenses) { lenses_ = std::move(lenses); }

  bool empty() const { return vertices_.empty(); }
  bool contains(const Simplex& s) const { return simplices_.count(s) != 0; }

  /// Inserts a sorted simplex; returns false if it was already present.
  bool add(Simplex s) { return simplices_.insert(std::move(s)).second; }

  /// -1 for the empty complex.
  int dimension() const {
    int d = -1;
    for (const auto& s : simplices_) d = std::max(d, static_cast<int>(s.size()) - 1);
    return d;
  }

  std::vector<Simplex> simplices_of_dim(std::size_t dim) const {
    std::vector<Simplex> out;
    for (const auto& s : simplices_)
      if (s.size() == dim + 1) out.push_back(s);
    return out;
  }

  std::size_t count_of_dim(std::size_t dim) const {
    std::size_t c = 0;
    for (const auto& s : simplices_)
      if (s.size() == dim + 1) ++c;
    return c;
  }

  std::vector<std::pair<VertexIndex, VertexIndex>> edges() const {
    std::vector<std::pair<VertexIndex, VertexIndex>> out;
    for (const auto& s : simplices_)
      if (s.size() == 2) out.emplace_back(s[0], s[1]);
    return out;
  }

  /// True when the member sets of every vertex of `s` share a point.
  bool nerve_condition(const Simplex& s) const { return common_point(s); }

  bool common_point(std::span<const VertexIndex> s) const {
    if (s.empty()) return false;
    if (s.size() == 1) return !vertices_[s[0]].members.empty();
    std::vector<PointIndex> acc = vertices_[s[0]].members;
    for (std::size_t k = 1; k < s.size() && !acc.empty(); ++k)
      acc = sorted_intersection(acc, vertices_[s[k]].members);
    return !acc.empty();
  }

 private:
  std::vector<CoverElement> vertices_;
  std::set<Simplex> simplices_;
  std::size_t max_dim_ = 1;
  std::size_t point_count_ = 0;
  std::vector<Lens> lenses_;
};

/// Sorts vertices by (origin, smallest member) and remaps simplices.
inline MapperComplex canonicalize_order(const MapperComplex& k) {
  std::vector<VertexIndex> order(k.vertex_count());
  for (VertexIndex i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](VertexIndex a, VertexIndex b) {
    const auto& va = k.vertex(a);
    const auto& vb = k.vertex(b);
    if (va.origin != vb.origin) return va.origin < vb.origin;
    return va.members < vb.members;
  });
  std::vector<VertexIndex> rank(order.size());
  std::vector<CoverElement> verts;
  verts.reserve(order.size());
  for (VertexIndex r = 0; r < order.size(); ++r) {
    rank[order[r]] = r;
    verts.push_back(k.vertex(order[r]));
  }
  MapperComplex out(std::move(verts), k.max_dim(), k.point_count(), k.lenses());
  for (const auto& s : k.simplices()) {
    Simplex t;
    t.reserve(s.size());
    for (VertexIndex v : s) t.push_back(rank[v]);
    std::sort(t.begin(), t.end());
    out.add(std::move(t));
  }
  return out;
}

/// Every face of every stored simplex is stored.
inline bool is_downward_closed(const MapperComplex& k) {
  for (const auto& s : k.simplices()) {
    if (s.size() < 2) continue;
    for (std::size_t drop = 0; drop < s.size(); ++drop) {
      Simplex f;
      for (std::size_t t = 0; t < s.size(); ++t)
        if (t != drop) f.push_back(s[t]);
      if (!k.contains(f)) return false;
    }
  }
  return true;
}

/// Keeps only simplices of dimension <= `dim`.
inline MapperComplex skeleton(const MapperComplex& k, std::size_t dim) {
  MapperComplex out(k.vertices(), std::min(dim, k.max_dim()), k.point_count(), k.lenses());
  for (const auto& s : k.simplices())
    if (s.size() <= dim + 1) out.add(s);
  return out;
}

/// Swaps origin factors and lenses, for viewing a bivariate complex from its
/// second filter.
inline MapperComplex swap_factors(const MapperComplex& k) {
  std::vector<CoverElement> verts = k.vertices();
  for (auto& v : verts) {
    std::swap(v.origin.first, v.origin.second);
    std::swap(v.parent_first, v.parent_second);
  }
  std::vector<Lens> lenses = k.lenses();
  if (lenses.size() == 2) std::swap(lenses[0], lenses[1]);
  MapperComplex out(std::move(verts), k.max_dim(), k.point_count(), std::move(lenses));
  for (const auto& s : k.simplices()) out.add(s);
  return out;
}

}  // namespace mapper_stitch

#endif
