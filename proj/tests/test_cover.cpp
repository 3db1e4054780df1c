#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "mapper_stitch/cover.hpp"

namespace ms = mapper_stitch;

TEST(BuildCover, ZeroOverlapPartition) {
  std::vector<double> v{0, 3.5, 10};
  auto c = ms::build_cover(v, 5, 0.0);
  ASSERT_EQ(c.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_NEAR(c[i].lo, 2.0 * i, 1e-12);
    EXPECT_NEAR(c[i].hi, 2.0 * i + 2, 1e-12);
    EXPECT_EQ(c[i].index, i);
  }
}

TEST(BuildCover, HalfOverlapTwoIntervals) {
  // ell = R / (n - (n-1) p) = 1 / 1.5
  std::vector<double> v{0, 1};
  auto c = ms::build_cover(v, 2, 0.5);
  EXPECT_NEAR(c.length(), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(c[0].lo, 0.0, 1e-12);
  EXPECT_NEAR(c[0].hi, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(c[1].lo, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(c[1].hi, 1.0, 1e-12);
}

TEST(BuildCover, SingleInterval) {
  std::vector<double> v{0, 0.25, 1};
  for (double p : {0.0, 0.3, 0.9}) {
    auto c = ms::build_cover(v, 1, p);
    ASSERT_EQ(c.size(), 1u);
    EXPECT_DOUBLE_EQ(c[0].lo, 0.0);
    EXPECT_DOUBLE_EQ(c[0].hi, 1.0);
  }
}

TEST(BuildCover, DegenerateRangeWidens) {
  std::vector<double> v{3, 3, 3};
  auto c = ms::build_cover(v, 4, 0.2);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_DOUBLE_EQ(c[0].lo, 3 - 1e-9);
  EXPECT_DOUBLE_EQ(c[0].hi, 3 + 1e-9);
  EXPECT_FALSE(c.locate(3.0).empty());
}

TEST(BuildCover, Errors) {
  std::vector<double> empty;
  EXPECT_THROW(ms::build_cover(empty, 3, 0.1), ms::SpecError);
  std::vector<double> v{0, 1};
  EXPECT_THROW(ms::build_cover(v, 0, 0.1), ms::SpecError);
  EXPECT_THROW(ms::build_cover(v, 3, 1.0), ms::SpecError);
  EXPECT_THROW(ms::build_cover(v, 3, -0.1), ms::SpecError);
}

TEST(Locate, SharedEndpointBelongsToBoth) {
  std::vector<double> v{0, 4};
  auto c = ms::build_cover(v, 2, 0.0);
  EXPECT_EQ(c.locate(2.0), (std::vector<std::size_t>{0, 1}));
}

TEST(Locate, OverlapRegion) {
  std::vector<double> v{0, 1};
  auto c = ms::build_cover(v, 2, 0.5);
  EXPECT_EQ(c.locate(0.5), (std::vector<std::size_t>{0, 1}));
  EXPECT_TRUE(c.locate(-1.0).empty());
  EXPECT_EQ(c.locate(0.0), (std::vector<std::size_t>{0}));
}

TEST(Product, CellCountsAndMembership) {
  std::vector<double> a{0, 1}, b{0, 2};
  auto pa = ms::build_cover(a, 3, 0.2);
  auto pb = ms::build_cover(b, 3, 0.2);
  auto pc = ms::product(pa, pb);
  EXPECT_EQ(pc.cells().size(), 9u);

  auto one = ms::product(ms::build_cover(a, 1, 0.0), ms::build_cover(b, 1, 0.0));
  ASSERT_EQ(one.cells().size(), 1u);
  EXPECT_EQ(one.first()[0].lo, 0.0);
  EXPECT_EQ(one.second()[0].hi, 2.0);

  std::mt19937 rng(4);
  std::uniform_real_distribution<double> ux(-0.2, 1.2), uy(-0.2, 2.2);
  for (int t = 0; t < 200; ++t) {
    double x = ux(rng), y = uy(rng);
    auto cells = pc.locate(x, y);
    std::size_t expected = pa.locate(x).size() * pb.locate(y).size();
    EXPECT_EQ(cells.size(), expected);
    for (const auto& cell : cells) EXPECT_TRUE(pc.contains(cell, x, y));
  }
}

// Coverage, overlap exactness and monotone lows over random parameters.
TEST(CoverProperties, RandomParameters) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> uv(-50, 50);
  std::uniform_int_distribution<int> un(1, 20);
  std::uniform_real_distribution<double> up(0.0, 0.95);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> values(30);
    for (auto& x : values) x = uv(rng);
    std::size_t n = static_cast<std::size_t>(un(rng));
    double p = up(rng);
    auto c = ms::build_cover(values, n, p);
    for (double x : values) EXPECT_FALSE(c.locate(x).empty());
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
      double shared = c[i].hi - c[i + 1].lo;
      EXPECT_NEAR(shared, p * c.length(), 1e-9 * std::max(1.0, c.length()));
      EXPECT_LT(c[i].lo, c[i + 1].lo);
      EXPECT_NEAR(c[i].hi - c[i].lo, c.length(), 1e-12 * std::max(1.0, c.length()) * 100);
      if (p < 0.5 && i + 2 < c.size()) {
        EXPECT_LT(c[i].hi, c[i + 2].lo);
      }
    }
  }
}
