#ifndef MAPPER_STITCH_COVER_HPP
#define MAPPER_STITCH_COVER_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mapper_stitch/errors.hpp"

namespace mapper_stitch {

/// Closed interval [lo, hi]; both endpoints belong to it.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t index = 0;

  bool contains(double v) const { return lo <= v && v <= hi; }
  bool operator==(const Interval&) const = default;
};

/**
 * Uniform cover of [min, max] by n closed intervals of common length
 * ell = R / (n - (n-1) p), with consecutive intervals offset by (1-p) ell so
 * that neighbours share exactly p * ell.
 */
class Cover {
 public:
  Cover() = default;
  Cover(std::vector<Interval> intervals, std::size_t resolution, double overlap, double range_min,
        double range_max, double length)
      : intervals_(std::move(intervals)),
        resolution_(resolution),
        overlap_(overlap),
        min_(range_min),
        max_(range_max),
        length_(length) {}

  const std::vector<Interval>& intervals() const { return intervals_; }
  const Interval& operator[](std::size_t i) const { return intervals_[i]; }
  std::size_t size() const { return intervals_.size(); }
  std::size_t resolution() const { return resolution_; }
  double overlap() const { return overlap_; }
  double range_min() const { return min_; }
  double range_max() const { return max_; }
  double length() const { return length_; }

  /// Indices of every interval containing `value`; empty when out of range.
  std::vector<std::size_t> locate(double value) const {
    std::vector<std::size_t> out;
    for (const auto& iv : intervals_)
      if (iv.contains(value)) out.push_back(iv.index);
    return out;
  }

  bool operator==(const Cover&) const = default;

 private:
  std::vector<Interval> intervals_;
  std::size_t resolution_ = 0;
  double overlap_ = 0.0;
  double min_ = 0.0;
  double max_ = 0.0;
  double length_ = 0.0;
};

inline constexpr double degenerate_range_halfwidth = 1e-9;

inline Cover build_cover(std::span<const double> values, std::size_t n, double p) {
  if (values.empty()) throw SpecError("cannot cover an empty value set");
  if (n < 1) throw SpecError("resolution must be at least 1");
  if (!(p >= 0.0 && p < 1.0)) throw SpecError("overlap out of range");
  for (double v : values)
    if (!std::isfinite(v)) throw SpecError("filter values must be finite");

  auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;

  if (hi == lo) {
    const double e = degenerate_range_halfwidth;
    return Cover({{lo - e, lo + e, 0}}, 1, p, lo, hi, 2.0 * e);
  }

  const double ell = (hi - lo) / (static_cast<double>(n) - static_cast<double>(n - 1) * p);
  const double step = ell * (1.0 - p);
  std::vector<Interval> intervals;
  intervals.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double a = lo + static_cast<double>(i) * step;
    intervals.push_back({a, a + ell, i});
  }
  // Pin the outer endpoints to the data range so rounding cannot drop extremes.
  intervals.front().lo = lo;
  intervals.back().hi = std::max(intervals.back().hi, hi);
  return Cover(std::move(intervals), n, p, lo, hi, ell);
}

/// Rectangle cover U_i x V_j of a bivariate filter's image.
class ProductCover {
 public:
  struct Cell {
    std::size_t first;
    std::size_t second;
  };

  ProductCover(Cover first, Cover second) : first_(std::move(first)), second_(std::move(second)) {
    for (std::size_t i = 0; i < first_.size(); ++i)
      for (std::size_t j = 0; j < second_.size(); ++j) cells_.push_back({i, j});
  }

  const Cover& first() const { return first_; }
  const Cover& second() const { return second_; }
  const std::vector<Cell>& cells() const { return cells_; }

  bool contains(const Cell& c, double a, double b) const {
    return first_[c.first].contains(a) && second_[c.second].contains(b);
  }

  /// All cells containing (a, b): locate(first, a) x locate(second, b).
  std::vector<Cell> locate(double a, double b) const {
    std::vector<Cell> out;
    for (std::size_t i : first_.locate(a))
      for (std::size_t j : second_.locate(b)) out.push_back({i, j});
    return out;
  }

 private:
  Cover first_;
  Cover second_;
  std::vector<Cell> cells_;
};

inline ProductCover product(const Cover& a, const Cover& b) { return ProductCover(a, b); }

}  // namespace mapper_stitch

#endif
