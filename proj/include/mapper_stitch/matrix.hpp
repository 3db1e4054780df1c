/**
 * Mapper graph matrix: univariate mappers on the diagonal, bivariate mappers
 * off the diagonal with gains measured against the row's univariate mapper.
 */
#ifndef MAPPER_STITCH_MATRIX_HPP
#define MAPPER_STITCH_MATRIX_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "mapper_stitch/composition.hpp"
#include "mapper_stitch/gains.hpp"
#include "mapper_stitch/mapper.hpp"

namespace mapper_stitch {

inline constexpr std::size_t max_matrix_variables = 8;

/// Either a shape to sample or a CSV (a name in the data directory or a path).
struct DatasetRef {
  std::string name;
  std::optional<Shape> shape;
  std::size_t n_points = 1000;
  double noise = 0.0;
};

struct MatrixSpec {
  DatasetRef dataset;
  std::vector<std::string> variables;
  std::vector<std::size_t> intervals;  // one per variable, or one shared value
  std::vector<double> overlap;         // same
  std::optional<double> epsilon;
  Measure measure = Measure::lhd0;
  RestrictionMode restriction = RestrictionMode::interior;
  std::size_t max_dim = default_max_dim;
  std::uint64_t seed = 0;
  bool verify = false;
  bool include_members = false;

  std::size_t intervals_of(std::size_t v) const { return intervals.size() == 1 ? intervals[0] : intervals[v]; }
  double overlap_of(std::size_t v) const { return overlap.size() == 1 ? overlap[0] : overlap[v]; }
};

inline void validate(const MatrixSpec& spec) {
  const std::size_t k = spec.variables.size();
  if (k < 2 || k > max_matrix_variables) throw SpecError("between 2 and 8 variables are required");
  if (spec.intervals.size() != 1 && spec.intervals.size() != k)
    throw SpecError("intervals must be one value or one per variable");
  if (spec.overlap.size() != 1 && spec.overlap.size() != k)
    throw SpecError("overlap must be one value or one per variable");
  for (std::size_t n : spec.intervals)
    if (n < 1) throw SpecError("intervals must be at least 1");
  for (double p : spec.overlap)
    if (!(p >= 0.0 && p < 1.0)) throw SpecError("overlap out of range");
  if (spec.epsilon && !(*spec.epsilon > 0.0 && std::isfinite(*spec.epsilon)))
    throw SpecError("epsilon must be positive");
  if (spec.max_dim < 1 || spec.max_dim > 6) throw SpecError("max_dim must be between 1 and 6");
  if (spec.dataset.name.empty() && !spec.dataset.shape) throw SpecError("dataset is required");
}

/**
 * Loads the referenced cloud. Every CSV column becomes both a coordinate and
 * a named attribute. With `allow_paths` false only plain names inside
 * `data_dir` are accepted.
 */
inline PointCloud load_dataset(const DatasetRef& ref, const std::filesystem::path& data_dir,
                               std::uint64_t seed, bool allow_paths) {
  if (ref.shape) return generate_shape(*ref.shape, ref.n_points, ref.noise, seed);
  const std::string& name = ref.name;
  const bool has_separator = name.find('/') != std::string::npos || name.find('\\') != std::string::npos;
  if (!allow_paths && (has_separator || name.find("..") != std::string::npos))
    throw DatasetNotFound("unknown dataset '" + name + "'");
  std::filesystem::path file;
  if (has_separator) {
    file = name;
  } else {
    file = data_dir / (name.ends_with(".csv") ? name : name + ".csv");
  }
  if (!std::filesystem::is_regular_file(file)) {
    if (has_separator) throw DataError("cannot open '" + file.string() + "'");
    throw DatasetNotFound("unknown dataset '" + name + "'");
  }
  const CsvTable table = read_csv_table(file.string());
  return load_csv(file.string(), table.header, table.header);
}

struct NodeView {
  VertexIndex id = 0;
  int interval = 0;  // interval of the row variable's cover
  std::size_t size = 0;
  std::vector<PointIndex> members;  // only with include_members
};

struct CellGraph {
  std::vector<NodeView> nodes;
  std::vector<std::pair<VertexIndex, VertexIndex>> edges;
  std::vector<Simplex> simplices;  // dimension >= 2
};

struct MatrixCell {
  std::size_t row = 0;
  std::size_t col = 0;
  CellGraph graph;
  std::vector<double> base, stitched, diff;
  double global_base = 0.0, global_stitched = 0.0, global_diff = 0.0;
  std::optional<bool> verified;
  std::string verification_report;  // empty unless verification failed
  std::optional<CompositionTrace> trace;
};

struct MatrixResult {
  MatrixSpec spec;
  std::size_t point_count = 0;
  double epsilon = 0.0;
  std::vector<MatrixCell> cells;  // row-major, k*k

  const MatrixCell& cell(std::size_t row, std::size_t col) const {
    return cells[row * spec.variables.size() + col];
  }
  bool all_verified() const {
    return std::all_of(cells.begin(), cells.end(), [](const MatrixCell& c) { return c.verified.value_or(true); });
  }
};

namespace detail {

inline std::size_t worker_count(std::size_t tasks) {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MAPPER_STITCH_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) n = static_cast<std::size_t>(v);
  }
  return std::max<std::size_t>(1, std::min(n, tasks));
}

/// Runs task(0..count-1) on a small pool; the first exception is rethrown.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task) {
  const std::size_t workers = worker_count(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

inline CellGraph view_graph(const MapperComplex& k, std::size_t factor, bool members) {
  CellGraph g;
  for (VertexIndex v = 0; v < k.vertex_count(); ++v) {
    NodeView n;
    n.id = v;
    n.interval = k.vertex(v).origin.factor(factor);
    n.size = k.vertex(v).members.size();
    if (members) n.members = k.vertex(v).members;
    g.nodes.push_back(std::move(n));
  }
  g.edges = k.edges();
  for (const auto& s : k.simplices())
    if (s.size() >= 3) g.simplices.push_back(s);
  return g;
}

inline void fill_gains(MatrixCell& cell, const GainReport& r) {
  cell.base = r.base_vector;
  cell.stitched = r.stitched_vector;
  cell.diff = r.diff_vector;
  cell.global_base = r.global_base;
  cell.global_stitched = r.global_stitched;
  cell.global_diff = r.global_diff;
}

}  // namespace detail

inline MatrixResult compute_matrix(const MatrixSpec& spec, const PointCloud& cloud) {
  validate(spec);
  const std::size_t k = spec.variables.size();
  std::vector<FilterFunction> filters;
  for (const auto& label : spec.variables) filters.push_back(resolve_filter(cloud, label));

  MatrixResult result;
  result.spec = spec;
  result.point_count = cloud.size();
  result.epsilon = spec.epsilon ? *spec.epsilon : default_epsilon(cloud);
  const NeighborhoodGraph graph = build_neighborhood_graph(cloud, result.epsilon);

  std::vector<Cover> covers(k);
  std::vector<MapperComplex> uni(k);
  detail::parallel_for(k, [&](std::size_t v) {
    covers[v] = build_cover(evaluate_filter(cloud, filters[v]), spec.intervals_of(v), spec.overlap_of(v));
    uni[v] = build_mapper(cloud, filters[v], covers[v], graph, spec.max_dim);
  });

  result.cells.resize(k * k);
  for (std::size_t v = 0; v < k; ++v) {
    MatrixCell& c = result.cells[v * k + v];
    c.row = c.col = v;
    c.graph = detail::view_graph(uni[v], 0, spec.include_members);
    auto r = gain_report(uni[v], uni[v], spec.measure, spec.restriction, 0);
    detail::fill_gains(c, r);
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) pairs.emplace_back(i, j);
  detail::parallel_for(pairs.size(), [&](std::size_t t) {
    auto [i, j] = pairs[t];
    MapperComplex bi =
        build_bivariate_mapper(cloud, filters[i], filters[j], product(covers[i], covers[j]), graph, spec.max_dim);
    for (auto [row, col, factor] : {std::tuple{i, j, std::size_t{0}}, std::tuple{j, i, std::size_t{1}}}) {
      MatrixCell& c = result.cells[row * k + col];
      c.row = row;
      c.col = col;
      c.graph = detail::view_graph(bi, factor, spec.include_members);
      detail::fill_gains(c, gain_report(uni[row], bi, spec.measure, spec.restriction, factor));
      if (spec.verify) {
        auto composed = compose(uni[row], uni[col], graph, spec.max_dim);
        auto rep = verify_equivalence(composed.complex, factor == 0 ? bi : swap_factors(bi));
        c.verified = rep.equal;
        if (!rep.equal) c.verification_report = rep.summary();
        c.trace = std::move(composed.trace);
      }
    }
  });
  return result;
}

inline MatrixResult compute_matrix(const MatrixSpec& spec, const std::filesystem::path& data_dir,
                                   bool allow_paths) {
  validate(spec);
  return compute_matrix(spec, load_dataset(spec.dataset, data_dir, spec.seed, allow_paths));
}

}  // namespace mapper_stitch

#endif
