/**
 * Point clouds, filter functions, CSV ingestion and synthetic test shapes.
 *
 * A PointCloud is immutable once built: point order is the stable identity
 * used by every downstream structure (cover elements store point indices).
 */
#ifndef MAPPER_STITCH_POINT_CLOUD_HPP
#define MAPPER_STITCH_POINT_CLOUD_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mapper_stitch/errors.hpp"

namespace mapper_stitch {

struct Column {
  std::string name;
  std::vector<double> values;
};

class PointCloud {
 public:
  PointCloud() = default;

  /// `coords` is row-major with `dimension` values per point.
  PointCloud(std::vector<double> coords, std::size_t dimension,
             std::vector<std::string> coordinate_names,
             std::vector<Column> columns = {})
      : coords_(std::move(coords)),
        dimension_(dimension),
        coordinate_names_(std::move(coordinate_names)),
        columns_(std::move(columns)) {
    if (dimension_ == 0) throw DataError("point dimension must be at least 1");
    if (coords_.size() % dimension_ != 0)
      throw DataError("coordinate buffer is not a multiple of the dimension");
    if (coordinate_names_.empty()) {
      for (std::size_t a = 0; a < dimension_; ++a)
        coordinate_names_.push_back(default_axis_name(a, dimension_));
    }
    if (coordinate_names_.size() != dimension_)
      throw DataError("one coordinate name per axis is required");
    for (double c : coords_)
      if (!std::isfinite(c)) throw DataError("non-finite coordinate");
    for (const auto& col : columns_) {
      if (col.values.size() != size())
        throw DataError("column '" + col.name + "' has wrong length");
      for (double v : col.values)
        if (!std::isfinite(v))
          throw DataError("column '" + col.name + "' has a non-finite value");
    }
  }

  std::size_t size() const { return dimension_ == 0 ? 0 : coords_.size() / dimension_; }
  std::size_t dimension() const { return dimension_; }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dimension_, dimension_};
  }
  double coordinate(std::size_t i, std::size_t axis) const {
    return coords_[i * dimension_ + axis];
  }

  const std::vector<double>& raw() const { return coords_; }
  const std::vector<std::string>& coordinate_names() const { return coordinate_names_; }
  const std::vector<Column>& columns() const { return columns_; }

  const Column* find_column(std::string_view name) const {
    for (const auto& c : columns_)
      if (c.name == name) return &c;
    return nullptr;
  }

  static std::string default_axis_name(std::size_t axis, std::size_t dimension) {
    if (dimension <= 3) return std::string(1, "xyz"[axis]);
    return "x" + std::to_string(axis);
  }

 private:
  std::vector<double> coords_;
  std::size_t dimension_ = 0;
  std::vector<std::string> coordinate_names_;
  std::vector<Column> columns_;
};

// ---------------------------------------------------------------------------
// Filter functions

class FilterFunction {
 public:
  enum class Kind { coordinate, column, linf_norm };

  static FilterFunction coordinate(std::size_t axis, std::string label = {}) {
    FilterFunction f;
    f.kind_ = Kind::coordinate;
    f.axis_ = axis;
    f.label_ = label.empty() ? "coord" + std::to_string(axis) : std::move(label);
    return f;
  }
  static FilterFunction column(std::string name) {
    FilterFunction f;
    f.kind_ = Kind::column;
    f.label_ = name;
    f.column_ = std::move(name);
    return f;
  }
  static FilterFunction linf_norm() {
    FilterFunction f;
    f.kind_ = Kind::linf_norm;
    f.label_ = "linf";
    return f;
  }

  Kind kind() const { return kind_; }
  std::size_t axis() const { return axis_; }
  const std::string& column_name() const { return column_; }
  const std::string& label() const { return label_; }

 private:
  Kind kind_ = Kind::coordinate;
  std::size_t axis_ = 0;
  std::string column_;
  std::string label_;
};

inline std::vector<double> evaluate_filter(const PointCloud& cloud, const FilterFunction& filter) {
  std::vector<double> out(cloud.size());
  switch (filter.kind()) {
    case FilterFunction::Kind::coordinate:
      if (filter.axis() >= cloud.dimension())
        throw SpecError("axis " + std::to_string(filter.axis()) + " out of range");
      for (std::size_t i = 0; i < cloud.size(); ++i) out[i] = cloud.coordinate(i, filter.axis());
      break;
    case FilterFunction::Kind::column: {
      const Column* col = cloud.find_column(filter.column_name());
      if (!col) throw SpecError("unknown column '" + filter.column_name() + "'");
      out = col->values;
      break;
    }
    case FilterFunction::Kind::linf_norm:
      for (std::size_t i = 0; i < cloud.size(); ++i) {
        double m = 0.0;
        for (double c : cloud.point(i)) m = std::max(m, std::abs(c));
        out[i] = m;
      }
      break;
  }
  return out;
}

/// Resolves a variable label against a cloud: attribute columns first, then
/// coordinate names, then "linf".
inline FilterFunction resolve_filter(const PointCloud& cloud, const std::string& label) {
  if (cloud.find_column(label)) return FilterFunction::column(label);
  const auto& names = cloud.coordinate_names();
  for (std::size_t a = 0; a < names.size(); ++a)
    if (names[a] == label) return FilterFunction::coordinate(a, label);
  if (label == "linf" || label == "Linf" || label == "L_inf") return FilterFunction::linf_norm();
  throw SpecError("unknown variable '" + label + "'");
}

// ---------------------------------------------------------------------------
// CSV

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  for (auto& c : cells) {
    auto first = c.find_first_not_of(" \t\r\"");
    auto last = c.find_last_not_of(" \t\r\"");
    c = first == std::string::npos ? std::string{} : c.substr(first, last - first + 1);
  }
  return cells;
}

inline bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace detail

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline CsvTable read_csv_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw DataError("'" + path + "' has no header row");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  table.header = detail::split_csv_line(line);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cells = detail::split_csv_line(line);
    if (cells.size() != table.header.size())
      throw DataError(path + ": line " + std::to_string(lineno) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(table.header.size()));
    table.rows.push_back(std::move(cells));
  }
  return table;
}

/**
 * Loads a point cloud. An empty `coordinate_columns` list means every header
 * column. Attribute columns become named filter columns; every loaded cell
 * must parse as a finite real.
 */
inline PointCloud load_csv(const std::string& path, std::vector<std::string> coordinate_columns,
                           std::vector<std::string> attribute_columns) {
  CsvTable table = read_csv_table(path);
  if (coordinate_columns.empty()) coordinate_columns = table.header;

  auto index_of = [&](const std::string& name) {
    auto it = std::find(table.header.begin(), table.header.end(), name);
    if (it == table.header.end()) throw DataError(path + ": missing column '" + name + "'");
    return static_cast<std::size_t>(it - table.header.begin());
  };
  auto cell_value = [&](std::size_t row, std::size_t col) {
    double v = 0.0;
    const std::string& s = table.rows[row][col];
    if (!detail::parse_double(s, v) || !std::isfinite(v))
      throw DataError(path + ": row " + std::to_string(row + 1) + ", column '" +
                      table.header[col] + "': invalid value '" + s + "'");
    return v;
  };

  std::vector<std::size_t> coord_idx;
  for (const auto& c : coordinate_columns) coord_idx.push_back(index_of(c));
  std::vector<std::size_t> attr_idx;
  for (const auto& c : attribute_columns) attr_idx.push_back(index_of(c));

  std::vector<double> coords;
  coords.reserve(table.rows.size() * coord_idx.size());
  std::vector<Column> columns(attr_idx.size());
  for (std::size_t a = 0; a < attr_idx.size(); ++a) columns[a].name = attribute_columns[a];
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    for (std::size_t c : coord_idx) coords.push_back(cell_value(r, c));
    for (std::size_t a = 0; a < attr_idx.size(); ++a)
      columns[a].values.push_back(cell_value(r, attr_idx[a]));
  }
  if (table.rows.empty()) throw DataError(path + ": no data rows");
  return PointCloud(std::move(coords), coord_idx.size(), std::move(coordinate_columns),
                    std::move(columns));
}

/// Writes coordinates followed by attribute columns, 17 significant digits.
inline void write_csv(const PointCloud& cloud, std::ostream& out) {
  bool first = true;
  auto sep = [&] {
    if (!first) out << ',';
    first = false;
  };
  for (const auto& n : cloud.coordinate_names()) sep(), out << n;
  for (const auto& c : cloud.columns())
    if (std::find(cloud.coordinate_names().begin(), cloud.coordinate_names().end(), c.name) ==
        cloud.coordinate_names().end())
      sep(), out << c.name;
  out << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    first = true;
    for (double c : cloud.point(i)) sep(), out << c;
    for (const auto& c : cloud.columns())
      if (std::find(cloud.coordinate_names().begin(), cloud.coordinate_names().end(), c.name) ==
          cloud.coordinate_names().end())
        sep(), out << c.values[i];
    out << '\n';
  }
}

inline void write_csv(const PointCloud& cloud, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  write_csv(cloud, out);
  if (!out) throw DataError("failed writing '" + path + "'");
}

// ---------------------------------------------------------------------------
// Synthetic shapes

enum class Shape { circle, two_circles, cylinder, half_cylinder, sphere };

namespace shape_constants {
inline constexpr double circle_radius = 1.0;
inline constexpr double two_circles_outer = 2.0;
inline constexpr double two_circles_inner = 0.6;
inline constexpr double cylinder_radius = 1.0;
inline constexpr double cylinder_height = 4.0;
inline constexpr double sphere_radius = 1.0;
}  // namespace shape_constants

inline Shape parse_shape(std::string_view name) {
  if (name == "circle") return Shape::circle;
  if (name == "two_circles") return Shape::two_circles;
  if (name == "cylinder") return Shape::cylinder;
  if (name == "half_cylinder") return Shape::half_cylinder;
  if (name == "sphere") return Shape::sphere;
  throw SpecError("unknown shape '" + std::string(name) + "'");
}

inline bool is_shape_name(std::string_view name) {
  return name == "circle" || name == "two_circles" || name == "cylinder" ||
         name == "half_cylinder" || name == "sphere";
}

inline std::string shape_name(Shape s) {
  switch (s) {
    case Shape::circle: return "circle";
    case Shape::two_circles: return "two_circles";
    case Shape::cylinder: return "cylinder";
    case Shape::half_cylinder: return "half_cylinder";
    case Shape::sphere: return "sphere";
  }
  return {};
}

/**
 * Samples a shape with isotropic Gaussian noise of standard deviation `noise`.
 * Circles use uniform angles; the sphere uses Marsaglia's method; cylinders are
 * uniform in (angle, height), centered on the origin with the axis along z.
 * The half cylinder keeps the x <= 0 half.
 */
inline PointCloud generate_shape(Shape shape, std::size_t n_points, double noise, std::uint64_t seed) {
  using namespace shape_constants;
  if (n_points < 10) throw SpecError("n_points must be at least 10");
  if (!(noise >= 0.0) || !std::isfinite(noise)) throw SpecError("noise must be a finite value >= 0");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double two_pi = 2.0 * std::numbers::pi;
  auto jitter = [&] { return noise > 0.0 ? noise * gauss(rng) : 0.0; };

  std::vector<double> coords;
  std::size_t dim = (shape == Shape::circle || shape == Shape::two_circles) ? 2 : 3;
  coords.reserve(n_points * dim);

  switch (shape) {
    case Shape::circle:
      for (std::size_t i = 0; i < n_points; ++i) {
        double t = two_pi * unit(rng);
        coords.push_back(circle_radius * std::cos(t) + jitter());
        coords.push_back(circle_radius * std::sin(t) + jitter());
      }
      break;
    case Shape::two_circles: {
      // Split proportionally to circumference so both rings have equal density.
      std::size_t n_outer = static_cast<std::size_t>(
          std::llround(n_points * two_circles_outer / (two_circles_outer + two_circles_inner)));
      for (std::size_t i = 0; i < n_points; ++i) {
        double r = i < n_outer ? two_circles_outer : two_circles_inner;
        double t = two_pi * unit(rng);
        coords.push_back(r * std::cos(t) + jitter());
        coords.push_back(r * std::sin(t) + jitter());
      }
      break;
    }
    case Shape::cylinder:
    case Shape::half_cylinder:
      for (std::size_t i = 0; i < n_points; ++i) {
        double t = shape == Shape::cylinder ? two_pi * unit(rng)
                                            : std::numbers::pi * (0.5 + unit(rng));
        double z = cylinder_height * (unit(rng) - 0.5);
        coords.push_back(cylinder_radius * std::cos(t) + jitter());
        coords.push_back(cylinder_radius * std::sin(t) + jitter());
        coords.push_back(z + jitter());
      }
      break;
    case Shape::sphere:
      for (std::size_t i = 0; i < n_points; ++i) {
        double a, b, s;
        do {
          a = 2.0 * unit(rng) - 1.0;
          b = 2.0 * unit(rng) - 1.0;
          s = a * a + b * b;
        } while (s >= 1.0);
        double k = 2.0 * std::sqrt(1.0 - s);
        coords.push_back(sphere_radius * a * k + jitter());
        coords.push_back(sphere_radius * b * k + jitter());
        coords.push_back(sphere_radius * (1.0 - 2.0 * s) + jitter());
      }
      break;
  }
  return PointCloud(std::move(coords), dim, {});
}

inline PointCloud generate_shape(std::string_view shape, std::size_t n_points, double noise,
                                 std::uint64_t seed) {
  return generate_shape(parse_shape(shape), n_points, noise, seed);
}

}  // namespace mapper_stitch

#endif
