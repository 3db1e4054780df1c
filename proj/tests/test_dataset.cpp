#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "mapper_stitch/point_cloud.hpp"

namespace ms = mapper_stitch;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& contents) {
  fs::path p = fs::temp_directory_path() / ("mapper_stitch_" + name);
  std::ofstream(p) << contents;
  return p;
}

std::string serialize(const ms::PointCloud& c) {
  std::ostringstream out;
  ms::write_csv(c, out);
  return out.str();
}

}  // namespace

TEST(LoadCsv, ThreeRowsTwoColumns) {
  auto p = write_temp("xy.csv", "x,y\n1,2\n3,4\n5,6\n");
  auto cloud = ms::load_csv(p.string(), {"x", "y"}, {});
  EXPECT_EQ(cloud.size(), 3u);
  EXPECT_EQ(cloud.dimension(), 2u);
  EXPECT_DOUBLE_EQ(cloud.coordinate(2, 1), 6.0);
}

TEST(LoadCsv, IrisHasFourUsableFilters) {
  const std::string path = std::string(MAPPER_STITCH_DATA_DIR) + "/iris.csv";
  const std::vector<std::string> cols{"sepal_length", "sepal_width", "petal_length", "petal_width"};
  auto cloud = ms::load_csv(path, cols, cols);
  EXPECT_EQ(cloud.size(), 150u);
  EXPECT_EQ(cloud.dimension(), 4u);
  for (const auto& c : cols) {
    auto values = ms::evaluate_filter(cloud, ms::resolve_filter(cloud, c));
    ASSERT_EQ(values.size(), 150u);
    for (double v : values) EXPECT_TRUE(std::isfinite(v));
  }
}

TEST(LoadCsv, NonFiniteCellNamesRowAndColumn) {
  auto p = write_temp("nan.csv", "a,b\n1,2\n3,NaN\n");
  try {
    ms::load_csv(p.string(), {"a", "b"}, {});
    FAIL() << "expected DataError";
  } catch (const ms::DataError& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("row 2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("'b'"), std::string::npos) << msg;
  }
}

TEST(LoadCsv, MissingFileAndColumn) {
  EXPECT_THROW(ms::load_csv("/definitely/not/here.csv", {}, {}), ms::DataError);
  auto p = write_temp("ab.csv", "a,b\n1,2\n");
  EXPECT_THROW(ms::load_csv(p.string(), {"a", "c"}, {}), ms::DataError);
  auto q = write_temp("text.csv", "a,b\n1,hello\n");
  EXPECT_THROW(ms::load_csv(q.string(), {}, {}), ms::DataError);
}

TEST(LoadCsv, ExportReloadIsIdentity) {
  auto cloud = ms::generate_shape(ms::Shape::sphere, 200, 0.05, 11);
  auto p = fs::temp_directory_path() / "mapper_stitch_roundtrip.csv";
  ms::write_csv(cloud, p.string());
  auto again = ms::load_csv(p.string(), {}, {});
  ASSERT_EQ(again.size(), cloud.size());
  ASSERT_EQ(again.dimension(), cloud.dimension());
  for (std::size_t i = 0; i < cloud.raw().size(); ++i)
    EXPECT_NEAR(again.raw()[i], cloud.raw()[i], 1e-12);
}

TEST(GenerateShape, CircleOnUnitRadius) {
  auto c = ms::generate_shape(ms::Shape::circle, 100, 0.0, 1);
  ASSERT_EQ(c.size(), 100u);
  ASSERT_EQ(c.dimension(), 2u);
  for (std::size_t i = 0; i < c.size(); ++i) {
    double r2 = c.coordinate(i, 0) * c.coordinate(i, 0) + c.coordinate(i, 1) * c.coordinate(i, 1);
    EXPECT_NEAR(r2, 1.0, 1e-9);
  }
}

TEST(GenerateShape, CylinderGeometry) {
  auto c = ms::generate_shape(ms::Shape::cylinder, 600, 0.0, 7);
  ASSERT_EQ(c.dimension(), 3u);
  double zmin = 1e9, zmax = -1e9;
  for (std::size_t i = 0; i < c.size(); ++i) {
    double r = std::hypot(c.coordinate(i, 0), c.coordinate(i, 1));
    EXPECT_NEAR(r, 1.0, 1e-9);
    zmin = std::min(zmin, c.coordinate(i, 2));
    zmax = std::max(zmax, c.coordinate(i, 2));
  }
  const double h = ms::shape_constants::cylinder_height;
  EXPECT_GE(zmin, -h / 2);
  EXPECT_LE(zmax, h / 2);
  EXPECT_LT(zmin, -h / 2 + 0.1);
  EXPECT_GT(zmax, h / 2 - 0.1);
}

TEST(GenerateShape, TwoCirclesResidual) {
  const double noise = 0.01;
  auto c = ms::generate_shape(ms::Shape::two_circles, 400, noise, 3);
  std::size_t near = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    double r = std::hypot(c.coordinate(i, 0), c.coordinate(i, 1));
    double res = std::min(std::abs(r - ms::shape_constants::two_circles_inner),
                          std::abs(r - ms::shape_constants::two_circles_outer));
    if (res <= 5 * noise) ++near;
  }
  EXPECT_GE(static_cast<double>(near), 0.99 * static_cast<double>(c.size()));
}

TEST(GenerateShape, HalfCylinderKeepsNonPositiveX) {
  auto c = ms::generate_shape(ms::Shape::half_cylinder, 300, 0.0, 2);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_LE(c.coordinate(i, 0), 1e-12);
}

TEST(GenerateShape, SphereOnUnitRadius) {
  auto c = ms::generate_shape(ms::Shape::sphere, 500, 0.0, 5);
  for (std::size_t i = 0; i < c.size(); ++i) {
    auto p = c.point(i);
    EXPECT_NEAR(std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]), 1.0, 1e-9);
  }
}

TEST(GenerateShape, ReproducibleBytes) {
  for (auto s : {ms::Shape::circle, ms::Shape::two_circles, ms::Shape::cylinder, ms::Shape::sphere}) {
    EXPECT_EQ(serialize(ms::generate_shape(s, 64, 0.02, 99)),
              serialize(ms::generate_shape(s, 64, 0.02, 99)));
  }
  EXPECT_NE(serialize(ms::generate_shape(ms::Shape::circle, 64, 0.0, 1)),
            serialize(ms::generate_shape(ms::Shape::circle, 64, 0.0, 2)));
}

TEST(GenerateShape, Errors) {
  EXPECT_THROW(ms::generate_shape("torus", 100, 0.0, 1), ms::SpecError);
  EXPECT_THROW(ms::generate_shape(ms::Shape::circle, 9, 0.0, 1), ms::SpecError);
  EXPECT_THROW(ms::generate_shape(ms::Shape::circle, 100, -1.0, 1), ms::SpecError);
}

TEST(EvaluateFilter, CoordinateProjection) {
  ms::PointCloud c({1, 2, 3, 4}, 2, {});
  auto v = ms::evaluate_filter(c, ms::FilterFunction::coordinate(0));
  EXPECT_EQ(v, (std::vector<double>{1, 3}));
  EXPECT_THROW(ms::evaluate_filter(c, ms::FilterFunction::coordinate(2)), ms::SpecError);
}

TEST(EvaluateFilter, LinfNorm) {
  ms::PointCloud c({1, -2, 0.5, 0.1}, 2, {});
  auto v = ms::evaluate_filter(c, ms::FilterFunction::linf_norm());
  EXPECT_EQ(v, (std::vector<double>{2, 0.5}));
}

TEST(EvaluateFilter, ColumnLookup) {
  auto p = write_temp("boston.csv", "RM,TAX,MEDV\n6.5,296,24\n6.4,242,21.6\n7.1,242,34.7\n");
  auto cloud = ms::load_csv(p.string(), {"RM", "TAX"}, {"MEDV"});
  auto v = ms::evaluate_filter(cloud, ms::resolve_filter(cloud, "MEDV"));
  EXPECT_EQ(v, (std::vector<double>{24, 21.6, 34.7}));
  EXPECT_THROW(ms::evaluate_filter(cloud, ms::FilterFunction::column("CRIM")), ms::SpecError);
  EXPECT_THROW(ms::resolve_filter(cloud, "CRIM"), ms::SpecError);
}

TEST(EvaluateFilter, LinfDominatesEveryCoordinate) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto c = ms::generate_shape(seed % 2 ? ms::Shape::sphere : ms::Shape::two_circles, 50, 0.3, seed);
    auto linf = ms::evaluate_filter(c, ms::FilterFunction::linf_norm());
    for (std::size_t a = 0; a < c.dimension(); ++a) {
      auto coord = ms::evaluate_filter(c, ms::FilterFunction::coordinate(a));
      for (std::size_t i = 0; i < c.size(); ++i) EXPECT_GE(linf[i], std::abs(coord[i]));
    }
  }
}
