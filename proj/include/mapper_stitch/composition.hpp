/**
 * Stitching two univariate mappers into a bivariate one.
 *
 * compose() runs three phases:
 *   STITCH    per interval U_i of the first mapper, intersect its vertices with
 *             the second mapper's vertices that reach U_i, split the
 *             intersections into components, and lift the second mapper's
 *             simplices onto those components;
 *   FIX       lift the first mapper's simplices across intervals;
 *   COMPLETE  add higher simplices whose facets are all present and whose
 *             member sets share a point.
 *
 * verify_equivalence() compares the result against the directly constructed
 * bivariate mapper.
 */
#ifndef MAPPER_STITCH_COMPOSITION_HPP
#define MAPPER_STITCH_COMPOSITION_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mapper_stitch/complex.hpp"
#include "mapper_stitch/errors.hpp"
#include "mapper_stitch/neighborhood.hpp"

namespace mapper_stitch {

enum class Phase { stitch, fix, complete };

inline const char* phase_name(Phase p) {
  switch (p) {
    case Phase::stitch: return "stitch";
    case Phase::fix: return "fix";
    case Phase::complete: return "complete";
  }
  return "";
}

struct IntervalTrace {
  std::size_t interval = 0;
  std::size_t replaced_vertices = 0;  // second-mapper vertices lifted in this interval
  std::size_t composed_elements = 0;
  std::size_t stitch_simplices = 0;   // vertices included
  std::size_t fix_simplices = 0;      // cross-interval simplices seeded from this interval
};

struct CompositionTrace {
  std::vector<IntervalTrace> intervals;
  std::vector<std::size_t> complete_rounds;  // [d-2] = simplices of dimension d added
  std::size_t checks_performed = 0;
  std::size_t checks_avoided = 0;
  std::size_t naive_candidates = 0;        // sum over d of C(|W|, d+1)
  std::size_t naive_edge_candidates = 0;   // C(|W|, 2)
  int dimension_after_fix_stage = -1;
  // Phase that added each simplex of the final complex, in final vertex indices.
  std::map<Simplex, Phase> provenance;
};

struct CompletionStats {
  std::vector<std::size_t> added_per_dim;  // [d-2]
  std::size_t checks_performed = 0;
  std::size_t candidates_examined = 0;
};

struct StitchResult {
  std::vector<CoverElement> elements;
  std::vector<Simplex> simplices;  // in indices of `elements`, vertices included
  std::size_t replaced_vertices = 0;
  std::size_t checks_performed = 0;
};

namespace detail {

inline std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  long double r = 1.0L;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<long double>(n - k + i) / i;
  return static_cast<std::size_t>(r + 0.5L);
}

inline const Lens& first_lens(const MapperComplex& k, const char* which) {
  if (k.lenses().empty() || !k.lenses()[0].values)
    throw SpecError(std::string(which) + " mapper carries no filter values");
  return k.lenses()[0];
}

/// Calls `fn` with every choice vector picking one entry from each list.
template <typename Fn>
void for_each_choice(const std::vector<const std::vector<VertexIndex>*>& lists, Fn&& fn) {
  for (const auto* l : lists)
    if (l->empty()) return;
  std::vector<std::size_t> idx(lists.size(), 0);
  std::vector<VertexIndex> pick(lists.size());
  while (true) {
    for (std::size_t t = 0; t < lists.size(); ++t) pick[t] = (*lists[t])[idx[t]];
    fn(pick);
    std::size_t t = lists.size();
    while (t > 0) {
      --t;
      if (++idx[t] < lists[t]->size()) break;
      idx[t] = 0;
      if (t == 0) return;
    }
    if (lists.empty()) return;
  }
}

inline std::vector<VertexIndex> canonical_rank(const std::vector<CoverElement>& verts) {
  std::vector<VertexIndex> order(verts.size());
  for (VertexIndex i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](VertexIndex a, VertexIndex b) {
    if (verts[a].origin != verts[b].origin) return verts[a].origin < verts[b].origin;
    return verts[a].members < verts[b].members;
  });
  std::vector<VertexIndex> rank(order.size());
  for (VertexIndex r = 0; r < order.size(); ++r) rank[order[r]] = r;
  return rank;
}

}  // namespace detail

/**
 * STITCH for one interval U_i of the first mapper mf.
 *
 * {u}: mf vertices built from U_i (so f(mu(u)) lies in U_i).
 * {v}: mg vertices with some member whose f-value lies in U_i.
 * {W}: connected components of mu(u) & mu(v).
 * Each simplex of mg induced on {v} is lifted by choosing one component per
 * vertex; a lift is kept only if its components share a point.
 */
inline StitchResult stitch_interval(std::size_t interval, const MapperComplex& mf,
                                    const MapperComplex& mg, const NeighborhoodGraph& graph,
                                    std::size_t max_dim = 3) {
  const Lens& lens = detail::first_lens(mf, "first");
  if (interval >= lens.cover.size()) throw SpecError("interval index out of range");
  const Interval& iv = lens.cover[interval];
  const std::vector<double>& f = *lens.values;

  StitchResult out;
  std::vector<VertexIndex> us;
  for (VertexIndex u = 0; u < mf.vertex_count(); ++u) {
    if (mf.vertex(u).origin.first != static_cast<int>(interval)) continue;
    for (PointIndex p : mf.vertex(u).members)
      if (!iv.contains(f[p]))
        throw InvariantError("first-mapper vertex has a member outside its interval");
    us.push_back(u);
  }

  std::vector<VertexIndex> vs;
  for (VertexIndex v = 0; v < mg.vertex_count(); ++v) {
    const auto& m = mg.vertex(v).members;
    if (std::any_of(m.begin(), m.end(), [&](PointIndex p) { return iv.contains(f[p]); }))
      vs.push_back(v);
  }
  if (vs.empty()) return out;

  // lifted[v] lists the composed elements replacing v in this interval.
  std::map<VertexIndex, std::vector<VertexIndex>> lifted;
  for (VertexIndex v : vs) {
    auto& slot = lifted[v];
    for (VertexIndex u : us) {
      auto common = sorted_intersection(mf.vertex(u).members, mg.vertex(v).members);
      for (auto& comp : components(graph, common)) {
        slot.push_back(static_cast<VertexIndex>(out.elements.size()));
        out.elements.push_back({std::move(comp),
                                {mf.vertex(u).origin.first, mg.vertex(v).origin.first},
                                static_cast<int>(u),
                                static_cast<int>(v)});
      }
    }
    if (!slot.empty()) ++out.replaced_vertices;
  }

  auto common_point = [&](const std::vector<VertexIndex>& pick) {
    std::vector<PointIndex> acc = out.elements[pick[0]].members;
    for (std::size_t t = 1; t < pick.size() && !acc.empty(); ++t)
      acc = sorted_intersection(acc, out.elements[pick[t]].members);
    return !acc.empty();
  };

  std::set<VertexIndex> vset(vs.begin(), vs.end());
  for (const auto& sigma : mg.simplices()) {
    if (sigma.size() > max_dim + 1) continue;
    if (!std::all_of(sigma.begin(), sigma.end(), [&](VertexIndex v) { return vset.count(v); }))
      continue;
    std::vector<const std::vector<VertexIndex>*> lists;
    for (VertexIndex v : sigma) lists.push_back(&lifted[v]);
    detail::for_each_choice(lists, [&](const std::vector<VertexIndex>& pick) {
      if (pick.size() > 1) {
        ++out.checks_performed;
        if (!common_point(pick)) return;
      }
      Simplex s(pick.begin(), pick.end());
      std::sort(s.begin(), s.end());
      out.simplices.push_back(std::move(s));
    });
  }
  std::sort(out.simplices.begin(), out.simplices.end());
  out.simplices.erase(std::unique(out.simplices.begin(), out.simplices.end()), out.simplices.end());
  return out;
}

/**
 * COMPLETE: for d = 2..max_dim add every (d+1)-vertex set whose facets are all
 * present and whose members share a point. Candidates are generated from an
 * existing d-vertex facet plus a vertex adjacent to all of it, so sets missing
 * an edge are never tested.
 */
inline MapperComplex complete(MapperComplex k, std::size_t max_dim, CompletionStats* stats = nullptr,
                              std::map<Simplex, Phase>* provenance = nullptr) {
  std::vector<std::vector<VertexIndex>> adj(k.vertex_count());
  for (auto [a, b] : k.edges()) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());

  for (std::size_t d = 2; d <= max_dim; ++d) {
    std::size_t added = 0;
    for (const auto& tau : k.simplices_of_dim(d - 1)) {
      // Common neighbours of tau larger than its last vertex.
      std::vector<VertexIndex> cand;
      const auto& first = adj[tau[0]];
      for (auto it = std::upper_bound(first.begin(), first.end(), tau.back()); it != first.end();
           ++it)
        cand.push_back(*it);
      for (std::size_t t = 1; t < tau.size() && !cand.empty(); ++t) {
        std::vector<VertexIndex> keep;
        std::set_intersection(cand.begin(), cand.end(), adj[tau[t]].begin(), adj[tau[t]].end(),
                              std::back_inserter(keep));
        cand.swap(keep);
      }
      for (VertexIndex x : cand) {
        Simplex c = tau;
        c.push_back(x);
        if (stats) ++stats->candidates_examined;
        bool facets = true;
        for (std::size_t drop = 0; drop + 1 < c.size() && facets; ++drop) {
          Simplex face;
          for (std::size_t t = 0; t < c.size(); ++t)
            if (t != drop) face.push_back(c[t]);
          facets = k.contains(face);
        }
        if (!facets) continue;
        if (stats) ++stats->checks_performed;
        if (!k.nerve_condition(c)) continue;
        if (provenance) (*provenance)[c] = Phase::complete;
        if (k.add(std::move(c))) ++added;
      }
    }
    if (stats) {
      if (stats->added_per_dim.size() < d - 1) stats->added_per_dim.resize(d - 1, 0);
      stats->added_per_dim[d - 2] += added;
    }
  }
  return k;
}

namespace detail {

/// Unique first-mapper vertex of the element's interval containing it.
inline VertexIndex containing_vertex(const CoverElement& w, const MapperComplex& mf) {
  int found = -1;
  for (VertexIndex u = 0; u < mf.vertex_count(); ++u) {
    const auto& cand = mf.vertex(u);
    if (cand.origin.first != w.origin.first) continue;
    if (!is_subset(w.members, cand.members)) continue;
    if (found >= 0)
      throw InvariantError("composed element is contained in two first-mapper vertices of interval " +
                           std::to_string(w.origin.first));
    found = static_cast<int>(u);
  }
  if (found < 0)
    throw InvariantError("no first-mapper vertex contains composed element (interval " +
                         std::to_string(w.origin.first) + ", smallest member " +
                         std::to_string(w.members.front()) + ")");
  if (w.parent_first >= 0 && found != w.parent_first)
    throw InvariantError("composed element parent disagrees with containment");
  return static_cast<VertexIndex>(found);
}

struct FixOutcome {
  MapperComplex complex;
  std::vector<std::size_t> per_element_added;
  std::size_t checks_performed = 0;
  std::vector<std::size_t> checks_by_dim;
};

inline FixOutcome fix_first_stage(MapperComplex partial, const MapperComplex& mf, std::size_t max_dim,
                                  std::map<Simplex, Phase>* provenance) {
  const std::size_t n = partial.vertex_count();
  FixOutcome out;
  out.per_element_added.assign(n, 0);
  out.checks_by_dim.assign(max_dim + 1, 0);

  std::vector<VertexIndex> parent(n);
  std::vector<std::vector<VertexIndex>> children(mf.vertex_count());
  for (VertexIndex w = 0; w < n; ++w) {
    parent[w] = containing_vertex(partial.vertex(w), mf);
    children[parent[w]].push_back(w);
  }
  std::vector<std::vector<const Simplex*>> star(mf.vertex_count());
  for (const auto& s : mf.simplices())
    if (s.size() >= 2 && s.size() <= max_dim + 1)
      for (VertexIndex u : s) star[u].push_back(&s);

  std::set<Simplex> rejected;
  for (std::size_t size = 2; size <= max_dim + 1; ++size) {
    for (VertexIndex w = 0; w < n; ++w) {
      const VertexIndex u = parent[w];
      for (const Simplex* sigma : star[u]) {
        if (sigma->size() != size) continue;
        // sigma_w = (sigma \ u) + w, each remaining vertex replaced by one of
        // its composed elements.
        std::vector<const std::vector<VertexIndex>*> lists;
        for (VertexIndex x : *sigma)
          if (x != u) lists.push_back(&children[x]);
        for_each_choice(lists, [&](const std::vector<VertexIndex>& pick) {
          Simplex c(pick.begin(), pick.end());
          c.push_back(w);
          std::sort(c.begin(), c.end());
          if (partial.contains(c) || rejected.count(c)) return;
          ++out.checks_performed;
          ++out.checks_by_dim[size - 1];
          if (!partial.nerve_condition(c)) {
            rejected.insert(c);
            return;
          }
          if (provenance) (*provenance)[c] = Phase::fix;
          partial.add(std::move(c));
          ++out.per_element_added[w];
        });
      }
    }
  }
  out.complex = std::move(partial);
  return out;
}

}  // namespace detail

/**
 * FIX over the stitched complex: lift every first-mapper simplex through the
 * composed elements, then COMPLETE.
 */
inline MapperComplex fix(MapperComplex partial, const MapperComplex& mf, std::size_t max_dim,
                         bool run_complete = true) {
  auto stage = detail::fix_first_stage(std::move(partial), mf, max_dim, nullptr);
  if (!run_complete) return std::move(stage.complex);
  return complete(std::move(stage.complex), max_dim);
}

struct CompositionResult {
  MapperComplex complex;
  CompositionTrace trace;
};

namespace detail {

inline void check_connected_members(const MapperComplex& k, const NeighborhoodGraph& graph,
                                    const char* which) {
  for (const auto& v : k.vertices()) {
    for (PointIndex p : v.members)
      if (p >= graph.size())
        throw SpecError(std::string(which) + " mapper references points outside the graph");
    if (components(graph, v.members).size() != 1)
      throw SpecError(std::string("graph is inconsistent with the ") + which +
                      " mapper: a vertex is not connected");
  }
}

}  // namespace detail

inline CompositionResult compose(const MapperComplex& mf, const MapperComplex& mg,
                                 const NeighborhoodGraph& graph, std::size_t max_dim = 3) {
  if (max_dim < 1) throw SpecError("max_dim must be at least 1");
  const Lens& lf = detail::first_lens(mf, "first");
  if (mf.point_count() != mg.point_count() || mf.point_count() != graph.size() ||
      lf.values->size() != graph.size())
    throw SpecError("mappers were built over different clouds");
  detail::check_connected_members(mf, graph, "first");
  detail::check_connected_members(mg, graph, "second");

  CompositionResult result;
  CompositionTrace& trace = result.trace;
  std::vector<CoverElement> elements;
  std::vector<std::pair<Simplex, std::size_t>> stitched;  // simplex, interval
  std::vector<std::size_t> element_interval;

  for (std::size_t i = 0; i < lf.cover.size(); ++i) {
    StitchResult s = stitch_interval(i, mf, mg, graph, max_dim);
    IntervalTrace it;
    it.interval = i;
    it.replaced_vertices = s.replaced_vertices;
    it.composed_elements = s.elements.size();
    it.stitch_simplices = s.simplices.size();
    trace.intervals.push_back(it);
    trace.checks_performed += s.checks_performed;

    const auto offset = static_cast<VertexIndex>(elements.size());
    for (auto& e : s.elements) {
      elements.push_back(std::move(e));
      element_interval.push_back(i);
    }
    for (auto& simplex : s.simplices) {
      for (auto& v : simplex) v += offset;
      stitched.emplace_back(std::move(simplex), i);
    }
  }

  std::vector<Lens> lenses{lf};
  if (!mg.lenses().empty()) lenses.push_back(mg.lenses()[0]);
  MapperComplex k(elements, max_dim, mf.point_count(), lenses);
  std::map<Simplex, Phase> provenance;
  for (auto& [simplex, interval] : stitched) {
    provenance[simplex] = Phase::stitch;
    k.add(simplex);
  }

  auto stage = detail::fix_first_stage(std::move(k), mf, max_dim, &provenance);
  trace.checks_performed += stage.checks_performed;
  for (VertexIndex w = 0; w < stage.per_element_added.size(); ++w)
    trace.intervals[element_interval[w]].fix_simplices += stage.per_element_added[w];
  trace.dimension_after_fix_stage = stage.complex.dimension();

  CompletionStats stats;
  MapperComplex completed = complete(std::move(stage.complex), max_dim, &stats, &provenance);
  stats.added_per_dim.resize(max_dim >= 2 ? max_dim - 1 : 0, 0);
  trace.complete_rounds = stats.added_per_dim;
  trace.checks_performed += stats.checks_performed;

  const std::size_t w_count = completed.vertex_count();
  trace.naive_edge_candidates = detail::binomial(w_count, 2);
  for (std::size_t d = 1; d <= max_dim; ++d) trace.naive_candidates += detail::binomial(w_count, d + 1);
  trace.checks_avoided =
      trace.naive_candidates > trace.checks_performed ? trace.naive_candidates - trace.checks_performed : 0;

  // Reorder vertices canonically and carry provenance along.
  auto rank = detail::canonical_rank(completed.vertices());
  MapperComplex ordered = canonicalize_order(completed);
  for (const auto& [s, phase] : provenance) {
    if (!completed.contains(s)) continue;
    Simplex t;
    for (VertexIndex v : s) t.push_back(rank[v]);
    std::sort(t.begin(), t.end());
    trace.provenance[t] = phase;
  }
  for (VertexIndex v = 0; v < ordered.vertex_count(); ++v)
    if (!trace.provenance.count({v})) trace.provenance[{v}] = Phase::stitch;
  result.complex = std::move(ordered);
  return result;
}

// ---------------------------------------------------------------------------
// Equivalence oracle

struct EquivalenceReport {
  bool equal = true;
  std::vector<std::string> missing_vertices;   // in direct, not in composed
  std::vector<std::string> extra_vertices;     // in composed, not in direct
  std::vector<std::string> missing_simplices;
  std::vector<std::string> extra_simplices;

  std::string summary() const {
    std::string s = equal ? "equal" : "not equal";
    auto dump = [&](const char* label, const std::vector<std::string>& items) {
      for (const auto& x : items) s += std::string("\n  ") + label + " " + x;
    };
    dump("missing vertex", missing_vertices);
    dump("extra vertex", extra_vertices);
    dump("missing simplex", missing_simplices);
    dump("extra simplex", extra_simplices);
    return s;
  }
};

namespace detail {

/// A vertex is identified by its sorted member set, disambiguated by origin
/// cell when two cells produce the same set.
struct VertexKey {
  std::vector<PointIndex> members;
  Origin origin;
  auto operator<=>(const VertexKey&) const = default;
};

inline std::string describe(const VertexKey& k) {
  return "(" + std::to_string(k.origin.first) + "," + std::to_string(k.origin.second) + ")#" +
         std::to_string(k.members.front()) + "[" + std::to_string(k.members.size()) + "]";
}

}  // namespace detail

inline EquivalenceReport verify_equivalence(const MapperComplex& composed, const MapperComplex& direct) {
  using detail::VertexKey;
  std::map<VertexKey, int> ids;
  auto keys_of = [&](const MapperComplex& k) {
    std::vector<int> id(k.vertex_count());
    for (VertexIndex v = 0; v < k.vertex_count(); ++v) {
      VertexKey key{k.vertex(v).members, k.vertex(v).origin};
      auto [it, inserted] = ids.emplace(std::move(key), static_cast<int>(ids.size()));
      id[v] = it->second;
    }
    return id;
  };
  auto cid = keys_of(composed);
  auto did = keys_of(direct);
  std::vector<const VertexKey*> by_id(ids.size());
  for (const auto& [k, i] : ids) by_id[static_cast<std::size_t>(i)] = &k;

  auto canonical = [](const MapperComplex& k, const std::vector<int>& id) {
    std::set<std::vector<int>> out;
    for (const auto& s : k.simplices()) {
      std::vector<int> t;
      for (VertexIndex v : s) t.push_back(id[v]);
      std::sort(t.begin(), t.end());
      out.insert(std::move(t));
    }
    return out;
  };
  auto cs = canonical(composed, cid);
  auto ds = canonical(direct, did);

  EquivalenceReport rep;
  auto text = [&](const std::vector<int>& s) {
    std::string r = "{";
    for (std::size_t t = 0; t < s.size(); ++t) {
      if (t) r += ", ";
      r += detail::describe(*by_id[static_cast<std::size_t>(s[t])]);
    }
    return r + "}";
  };
  for (const auto& s : ds)
    if (!cs.count(s)) (s.size() == 1 ? rep.missing_vertices : rep.missing_simplices).push_back(text(s));
  for (const auto& s : cs)
    if (!ds.count(s)) (s.size() == 1 ? rep.extra_vertices : rep.extra_simplices).push_back(text(s));
  if (composed.vertex_count() != direct.vertex_count() && rep.missing_vertices.empty() &&
      rep.extra_vertices.empty())
    rep.extra_vertices.push_back("vertex multiplicity differs: " +
                                 std::to_string(composed.vertex_count()) + " vs " +
                                 std::to_string(direct.vertex_count()));
  rep.equal = rep.missing_vertices.empty() && rep.extra_vertices.empty() &&
              rep.missing_simplices.empty() && rep.extra_simplices.empty();
  return rep;
}

}  // namespace mapper_stitch

#endif
