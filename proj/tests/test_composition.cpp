#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "mapper_stitch/composition.hpp"
#include "mapper_stitch/homology.hpp"
#include "mapper_stitch/mapper.hpp"

namespace ms = mapper_stitch;

namespace {

struct Setup {
  ms::PointCloud cloud;
  ms::NeighborhoodGraph graph;
  ms::MapperComplex mf, mg, direct;
};

Setup make_setup(ms::PointCloud cloud, double eps, std::size_t af, std::size_t ag, std::size_t nf,
                 double pf, std::size_t ng, double pg, std::size_t max_dim = 3) {
  auto graph = ms::build_neighborhood_graph(cloud, eps);
  auto f = ms::FilterFunction::coordinate(af);
  auto g = ms::FilterFunction::coordinate(ag);
  auto cf = ms::build_cover(ms::evaluate_filter(cloud, f), nf, pf);
  auto cg = ms::build_cover(ms::evaluate_filter(cloud, g), ng, pg);
  auto mf = ms::build_mapper(cloud, f, cf, graph, max_dim);
  auto mg = ms::build_mapper(cloud, g, cg, graph, max_dim);
  auto direct = ms::build_bivariate_mapper(cloud, f, g, ms::product(cf, cg), graph, max_dim);
  return {std::move(cloud), std::move(graph), std::move(mf), std::move(mg), std::move(direct)};
}

Setup half_cylinder() {
  return make_setup(ms::generate_shape(ms::Shape::half_cylinder, 3000, 0.0, 5), 0.2, 0, 2, 2, 0.2, 3,
                    0.2);
}

// Evenly spaced circle embedded as (x, y, -x): filters x and -x cut it into
// arcs whose intersection is two disjoint pieces.
ms::PointCloud mirrored_circle(std::size_t n) {
  std::vector<double> coords;
  for (std::size_t i = 0; i < n; ++i) {
    double t = 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    coords.insert(coords.end(), {std::cos(t), std::sin(t), -std::cos(t)});
  }
  return ms::PointCloud(std::move(coords), 3, {});
}

}  // namespace

TEST(Compose, HalfCylinderWalkthrough) {
  auto s = half_cylinder();
  EXPECT_EQ(s.mf.vertex_count(), 3u);
  EXPECT_EQ(s.mg.vertex_count(), 3u);

  auto st0 = ms::stitch_interval(0, s.mf, s.mg, s.graph);
  auto st1 = ms::stitch_interval(1, s.mf, s.mg, s.graph);
  EXPECT_EQ(st0.elements.size() + st1.elements.size(), 9u);
  EXPECT_EQ(std::min(st0.elements.size(), st1.elements.size()), 3u);
  EXPECT_EQ(st0.replaced_vertices, 3u);
  EXPECT_EQ(st1.replaced_vertices, 3u);

  auto r = ms::compose(s.mf, s.mg, s.graph);
  EXPECT_EQ(r.complex.vertex_count(), 9u);
  EXPECT_EQ(r.complex.count_of_dim(3), 4u);
  EXPECT_EQ(r.trace.dimension_after_fix_stage, 1);
  ASSERT_EQ(r.trace.complete_rounds.size(), 2u);
  EXPECT_EQ(r.trace.complete_rounds[1], 4u);
  auto rep = ms::verify_equivalence(r.complex, s.direct);
  EXPECT_TRUE(rep.equal) << rep.summary();
}

TEST(Compose, SplitVertexGetsTwoElements) {
  auto s = make_setup(mirrored_circle(400), 0.05, 0, 2, 2, 0.5, 2, 0.5);
  ASSERT_EQ(s.mf.vertex_count(), 2u);
  ASSERT_EQ(s.mg.vertex_count(), 2u);
  auto st = ms::stitch_interval(0, s.mf, s.mg, s.graph);
  std::map<int, int> per_parent;
  for (const auto& e : st.elements) ++per_parent[e.parent_second];
  EXPECT_TRUE(std::any_of(per_parent.begin(), per_parent.end(), [](auto& kv) { return kv.second == 2; }));

  auto r = ms::compose(s.mf, s.mg, s.graph);
  EXPECT_TRUE(ms::verify_equivalence(r.complex, s.direct).equal);
  EXPECT_EQ(r.complex.vertex_count(), 6u);
}

TEST(Compose, FixOmitsPairsWithoutCommonPoint) {
  auto s = make_setup(mirrored_circle(400), 0.05, 0, 2, 2, 0.5, 2, 0.5);
  auto r = ms::compose(s.mf, s.mg, s.graph);
  // Pairs of elements whose parents span the single first-mapper edge.
  std::size_t lifted = 0, kept = 0;
  for (ms::VertexIndex a = 0; a < r.complex.vertex_count(); ++a)
    for (ms::VertexIndex b = a + 1; b < r.complex.vertex_count(); ++b) {
      if (r.complex.vertex(a).origin.first == r.complex.vertex(b).origin.first) continue;
      ++lifted;
      kept += r.complex.contains({a, b});
    }
  EXPECT_GT(lifted, kept);
  EXPECT_GT(kept, 0u);
}

TEST(Compose, TrivialSecondMapperReproducesFirst) {
  auto s = make_setup(ms::generate_shape(ms::Shape::sphere, 300, 0.0, 4), 0.35, 0, 1, 4, 0.3, 1, 0.1);
  ASSERT_EQ(s.mg.vertex_count(), 1u);
  auto r = ms::compose(s.mf, s.mg, s.graph);
  ASSERT_EQ(r.complex.vertex_count(), s.mf.vertex_count());
  std::set<std::vector<ms::PointIndex>> a, b;
  for (const auto& v : r.complex.vertices()) a.insert(v.members);
  for (const auto& v : s.mf.vertices()) b.insert(v.members);
  EXPECT_EQ(a, b);
  EXPECT_EQ(r.complex.simplices().size(), s.mf.simplices().size());
}

TEST(Compose, TrivialFirstMapperReproducesSecond) {
  auto s = make_setup(ms::generate_shape(ms::Shape::sphere, 300, 0.0, 4), 0.35, 0, 1, 1, 0.1, 4, 0.3);
  auto r = ms::compose(s.mf, s.mg, s.graph);
  ASSERT_EQ(r.complex.vertex_count(), s.mg.vertex_count());
  EXPECT_EQ(r.complex.simplices().size(), s.mg.simplices().size());
  EXPECT_TRUE(ms::verify_equivalence(r.complex, s.direct).equal);
}

TEST(Complete, HollowAndFilledTriangles) {
  std::vector<ms::CoverElement> hollow{{{0, 1}, {0, 0}}, {{1, 2}, {0, 1}}, {{0, 2}, {0, 2}}};
  ms::MapperComplex k(hollow, 3, 3);
  k.add({0, 1});
  k.add({1, 2});
  k.add({0, 2});
  ms::CompletionStats stats;
  auto done = ms::complete(k, 3, &stats);
  EXPECT_EQ(done.count_of_dim(2), 0u);
  EXPECT_EQ(stats.checks_performed, 1u);

  std::vector<ms::CoverElement> filled{{{0, 1, 3}, {0, 0}}, {{1, 2, 3}, {0, 1}}, {{0, 2, 3}, {0, 2}}};
  ms::MapperComplex f(filled, 3, 4);
  f.add({0, 1});
  f.add({1, 2});
  f.add({0, 2});
  EXPECT_EQ(ms::complete(f, 3).count_of_dim(2), 1u);
  // Missing edge: the triangle is never a candidate.
  ms::MapperComplex g(filled, 3, 4);
  g.add({0, 1});
  g.add({1, 2});
  EXPECT_EQ(ms::complete(g, 3).count_of_dim(2), 0u);
}

TEST(Verify, ReportsOneMissingSimplex) {
  auto s = half_cylinder();
  auto r = ms::compose(s.mf, s.mg, s.graph);
  // Drop a tetrahedron; nothing has it as a face.
  auto tets = r.complex.simplices_of_dim(3);
  ASSERT_FALSE(tets.empty());
  std::optional<ms::Simplex> victim = tets.front();
  ms::MapperComplex broken(r.complex.vertices(), r.complex.max_dim(), r.complex.point_count());
  for (const auto& sx : r.complex.simplices())
    if (sx != *victim) broken.add(sx);
  auto rep = ms::verify_equivalence(broken, s.direct);
  EXPECT_FALSE(rep.equal);
  EXPECT_EQ(rep.missing_simplices.size(), 1u);
  EXPECT_TRUE(rep.extra_simplices.empty());
  EXPECT_TRUE(rep.missing_vertices.empty());
  EXPECT_NE(rep.summary().find("missing simplex"), std::string::npos);
}

TEST(Verify, EmptyEqualsEmpty) {
  ms::MapperComplex a, b;
  EXPECT_TRUE(ms::verify_equivalence(a, b).equal);
}

TEST(Compose, RejectsMismatchedInputs) {
  auto s = half_cylinder();
  auto other = make_setup(ms::generate_shape(ms::Shape::circle, 100, 0.0, 1), 0.2, 0, 1, 2, 0.2, 2, 0.2);
  EXPECT_THROW(ms::compose(s.mf, other.mg, s.graph), ms::SpecError);
  EXPECT_THROW(ms::compose(s.mf, s.mg, s.graph, 0), ms::SpecError);
  EXPECT_THROW(ms::stitch_interval(7, s.mf, s.mg, s.graph), ms::SpecError);
}

// Composed equals direct over a randomized corpus, plus phase and trace bookkeeping.
TEST(Compose, RandomizedOracle) {
  std::mt19937_64 rng(20240601);
  for (int trial = 0; trial < 150; ++trial) {
    std::uniform_int_distribution<int> npts(10, 60), nres(2, 5), dim(2, 3);
    std::uniform_real_distribution<double> coord(0, 1), over(0.1, 0.4);
    std::size_t n = static_cast<std::size_t>(npts(rng));
    std::size_t d = static_cast<std::size_t>(dim(rng));
    std::vector<double> coords(n * d);
    for (auto& x : coords) x = coord(rng);
    ms::PointCloud c(coords, d, {});
    double eps = ms::default_epsilon(c);
    std::size_t af = static_cast<std::size_t>(trial) % d, ag = (af + 1) % d;
    auto s = make_setup(c, eps, af, ag, static_cast<std::size_t>(nres(rng)), over(rng),
                        static_cast<std::size_t>(nres(rng)), over(rng));
    auto r = ms::compose(s.mf, s.mg, s.graph, 3);
    auto rep = ms::verify_equivalence(r.complex, s.direct);
    ASSERT_TRUE(rep.equal) << "trial " << trial << ": " << rep.summary();

    EXPECT_TRUE(ms::is_downward_closed(r.complex));
    for (const auto& sx : r.complex.simplices()) {
      EXPECT_TRUE(r.complex.nerve_condition(sx));
      EXPECT_EQ(r.trace.provenance.count(sx), 1u);
    }
    EXPECT_EQ(r.trace.provenance.size(), r.complex.simplices().size());
    std::size_t elems = 0;
    for (const auto& it : r.trace.intervals) elems += it.composed_elements;
    EXPECT_EQ(elems, r.complex.vertex_count());
    EXPECT_GE(r.trace.naive_candidates, r.trace.checks_avoided);
    auto again = ms::complete(r.complex, 3);
    EXPECT_EQ(again.simplices(), r.complex.simplices());
  }
}
