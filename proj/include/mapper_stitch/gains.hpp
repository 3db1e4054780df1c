/**
 * Topological gains of a bivariate mapper over a univariate one, measured per
 * interval of the univariate cover:
 *
 *   LHD_p = beta_p(bi restricted to U_i) - beta_p(uni restricted to U_i)
 *   LREC  = chi(bi | U_i) - chi(uni | U_i)
 *   LED   = H(bi graph | U_i) - H(uni graph | U_i),   H in {H_D, H_A}
 *
 * Global entries apply the same measure to the unrestricted complexes.
 */
#ifndef MAPPER_STITCH_GAINS_HPP
#define MAPPER_STITCH_GAINS_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mapper_stitch/complex.hpp"
#include "mapper_stitch/entropy.hpp"
#include "mapper_stitch/errors.hpp"
#include "mapper_stitch/homology.hpp"

namespace mapper_stitch {

enum class RestrictionMode { interior, boundary };
enum class Measure { lhd0, lhd1, lrec, led_d, led_a };

inline std::string to_string(RestrictionMode m) {
  return m == RestrictionMode::interior ? "interior" : "boundary";
}

inline std::string to_string(Measure m) {
  switch (m) {
    case Measure::lhd0: return "lhd0";
    case Measure::lhd1: return "lhd1";
    case Measure::lrec: return "lrec";
    case Measure::led_d: return "led_d";
    case Measure::led_a: return "led_a";
  }
  return {};
}

inline RestrictionMode parse_restriction(std::string_view s) {
  if (s == "interior") return RestrictionMode::interior;
  if (s == "boundary") return RestrictionMode::boundary;
  throw SpecError("unknown restriction '" + std::string(s) + "'");
}

inline Measure parse_measure(std::string_view s) {
  if (s == "lhd0") return Measure::lhd0;
  if (s == "lhd1") return Measure::lhd1;
  if (s == "lrec") return Measure::lrec;
  if (s == "led_d") return Measure::led_d;
  if (s == "led_a") return Measure::led_a;
  throw SpecError("unknown measure '" + std::string(s) + "'");
}

/// Entropy measures act on the 1-skeleton only.
inline bool is_graph_measure(Measure m) { return m == Measure::led_d || m == Measure::led_a; }

/**
 * Subcomplex of `k` at interval `interval` of factor `factor` (0 = first
 * filter). Interior keeps the simplices spanned by the interval's own
 * vertices; boundary adds every coface of those and closes under faces.
 */
inline MapperComplex restrict_to_interval(const MapperComplex& k, std::size_t interval,
                                          RestrictionMode mode, std::size_t factor = 0) {
  if (factor > 1) throw SpecError("factor must be 0 or 1");
  if (factor < k.lenses().size()) {
    if (interval >= k.lenses()[factor].cover.size()) throw SpecError("interval index out of range");
  }

  std::vector<char> inside(k.vertex_count(), 0);
  for (VertexIndex v = 0; v < k.vertex_count(); ++v)
    inside[v] = k.vertex(v).origin.factor(factor) == static_cast<int>(interval);

  std::vector<const Simplex*> kept;
  std::vector<char> used(k.vertex_count(), 0);
  for (const auto& s : k.simplices()) {
    bool take = mode == RestrictionMode::interior
                    ? std::all_of(s.begin(), s.end(), [&](VertexIndex v) { return inside[v]; })
                    : std::any_of(s.begin(), s.end(), [&](VertexIndex v) { return inside[v]; });
    if (!take) continue;
    kept.push_back(&s);
    for (VertexIndex v : s) used[v] = 1;
  }

  std::vector<VertexIndex> remap(k.vertex_count(), 0);
  std::vector<CoverElement> verts;
  for (VertexIndex v = 0; v < k.vertex_count(); ++v)
    if (used[v]) {
      remap[v] = static_cast<VertexIndex>(verts.size());
      verts.push_back(k.vertex(v));
    }
  MapperComplex out(std::move(verts), k.max_dim(), k.point_count(), k.lenses());
  auto add_with_faces = [&](const Simplex& s) {
    // Every face of a stored simplex is stored in k, so the closure is the set
    // of all nonempty subsets.
    const std::size_t n = s.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
      Simplex f;
      for (std::size_t t = 0; t < n; ++t)
        if (mask & (std::size_t{1} << t)) f.push_back(remap[s[t]]);
      out.add(std::move(f));
    }
  };
  for (const Simplex* s : kept) {
    if (mode == RestrictionMode::interior) {
      Simplex t;
      for (VertexIndex v : *s) t.push_back(remap[v]);
      out.add(std::move(t));
    } else {
      add_with_faces(*s);
    }
  }
  return out;
}

/// Value of a measure on one (restricted) complex; an empty complex scores 0.
inline double measure_value(const MapperComplex& k, Measure m) {
  switch (m) {
    case Measure::lhd0: return static_cast<double>(betti(k, 0));
    case Measure::lhd1: return static_cast<double>(betti(k, 1));
    case Measure::lrec: return static_cast<double>(euler(k));
    case Measure::led_d: return k.empty() ? 0.0 : entropy_distance(one_skeleton(k));
    case Measure::led_a: return entropy_adjacency(one_skeleton(k));
  }
  return 0.0;
}

struct GainReport {
  Measure measure = Measure::lhd0;
  RestrictionMode restriction = RestrictionMode::interior;
  std::vector<double> base_vector;
  std::vector<double> stitched_vector;
  std::vector<double> diff_vector;
  double global_base = 0.0;
  double global_stitched = 0.0;
  double global_diff = 0.0;
};

/// Per-interval values of `m` over the cover of factor `factor`.
inline std::vector<double> localized_vector(const MapperComplex& k, Measure m, RestrictionMode mode,
                                            std::size_t factor, std::size_t intervals) {
  std::vector<double> out;
  out.reserve(intervals);
  for (std::size_t i = 0; i < intervals; ++i)
    out.push_back(measure_value(restrict_to_interval(k, i, mode, factor), m));
  return out;
}

/**
 * Differences bi - uni per interval of uni's cover. `factor` selects which
 * factor of `bi` corresponds to `uni` (0 when uni's filter came first).
 */
inline GainReport gain_report(const MapperComplex& uni, const MapperComplex& bi, Measure m,
                              RestrictionMode mode, std::size_t factor = 0) {
  if (uni.lenses().empty() || bi.lenses().size() <= factor)
    throw SpecError("gain report needs the covers of both mappers");
  const Cover& cover = uni.lenses()[0].cover;
  if (!(bi.lenses()[factor].cover == cover)) throw SpecError("cover mismatch");
  if (uni.point_count() != bi.point_count()) throw SpecError("mappers were built over different clouds");

  GainReport r;
  r.measure = m;
  r.restriction = mode;
  r.base_vector = localized_vector(uni, m, mode, 0, cover.size());
  r.stitched_vector = localized_vector(bi, m, mode, factor, cover.size());
  r.diff_vector.resize(cover.size());
  for (std::size_t i = 0; i < cover.size(); ++i)
    r.diff_vector[i] = r.stitched_vector[i] - r.base_vector[i];
  r.global_base = measure_value(uni, m);
  r.global_stitched = measure_value(bi, m);
  r.global_diff = r.global_stitched - r.global_base;
  return r;
}

}  // namespace mapper_stitch

#endif
