#ifndef MAPPER_STITCH_HOMOLOGY_HPP
#define MAPPER_STITCH_HOMOLOGY_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "mapper_stitch/complex.hpp"
#include "mapper_stitch/errors.hpp"
#include "mapper_stitch/union_find.hpp"

namespace mapper_stitch {

namespace detail {

/// Dense bit-row matrix over Z/2.
class BitMatrix {
 public:
  BitMatrix(std::size_t rows, std::size_t cols)
      : cols_(cols), words_((cols + 63) / 64), data_(rows * words_, 0) {}

  void flip(std::size_t r, std::size_t c) { data_[r * words_ + c / 64] ^= std::uint64_t{1} << (c % 64); }
  bool get(std::size_t r, std::size_t c) const {
    return (data_[r * words_ + c / 64] >> (c % 64)) & 1u;
  }
  std::size_t rows() const { return words_ == 0 ? 0 : data_.size() / words_; }

  /// Gaussian elimination; destroys the matrix.
  std::size_t rank() {
    const std::size_t m = rows();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols_ && r < m; ++c) {
      std::size_t pivot = r;
      while (pivot < m && !get(pivot, c)) ++pivot;
      if (pivot == m) continue;
      if (pivot != r)
        for (std::size_t w = 0; w < words_; ++w) std::swap(data_[pivot * words_ + w], data_[r * words_ + w]);
      for (std::size_t i = r + 1; i < m; ++i)
        if (get(i, c))
          for (std::size_t w = c / 64; w < words_; ++w) data_[i * words_ + w] ^= data_[r * words_ + w];
      ++r;
    }
    return r;
  }

 private:
  std::size_t cols_;
  std::size_t words_;
  std::vector<std::uint64_t> data_;
};

/// Rank over Z/2 of the boundary map from dim-simplices to (dim-1)-simplices.
inline std::size_t boundary_rank(const MapperComplex& k, std::size_t dim) {
  if (dim == 0) return 0;
  auto lower = k.simplices_of_dim(dim - 1);
  auto upper = k.simplices_of_dim(dim);
  if (lower.empty() || upper.empty()) return 0;
  std::map<Simplex, std::size_t> index;
  for (std::size_t i = 0; i < lower.size(); ++i) index.emplace(lower[i], i);
  BitMatrix m(upper.size(), lower.size());
  for (std::size_t r = 0; r < upper.size(); ++r) {
    const auto& s = upper[r];
    for (std::size_t drop = 0; drop < s.size(); ++drop) {
      Simplex face;
      for (std::size_t t = 0; t < s.size(); ++t)
        if (t != drop) face.push_back(s[t]);
      auto it = index.find(face);
      if (it == index.end()) throw InvariantError("complex is not downward closed");
      m.flip(r, it->second);
    }
  }
  return m.rank();
}

/// beta_p = dim ker d_p - rank d_{p+1}, any p (test and internal use).
inline std::size_t betti_z2(const MapperComplex& k, std::size_t p) {
  const std::size_t cells = k.count_of_dim(p);
  return cells - boundary_rank(k, p) - boundary_rank(k, p + 1);
}

}  // namespace detail

/// Connected components of the vertex/edge structure.
inline std::size_t connected_components(const MapperComplex& k) {
  UnionFind uf(k.vertex_count());
  for (auto [a, b] : k.edges()) uf.unite(a, b);
  return uf.set_count();
}

/// Betti numbers over Z/2 for p in {0, 1}.
inline std::size_t betti(const MapperComplex& k, std::size_t p) {
  if (p == 0) return connected_components(k);
  if (p == 1) {
    const std::size_t v = k.vertex_count();
    const std::size_t e = k.count_of_dim(1);
    const std::size_t rank1 = v - connected_components(k);
    return e - rank1 - detail::boundary_rank(k, 2);
  }
  throw SpecError("betti numbers are supported for p = 0 and p = 1 only");
}

/// |E| - |V| + beta_0, the cycle rank of the 1-skeleton.
inline long graph_cycle_rank(const MapperComplex& k) {
  return static_cast<long>(k.count_of_dim(1)) - static_cast<long>(k.vertex_count()) +
         static_cast<long>(connected_components(k));
}

inline long euler(const MapperComplex& k) {
  long chi = 0;
  for (const auto& s : k.simplices()) chi += (s.size() % 2 == 1) ? 1 : -1;
  return chi;
}

}  // namespace mapper_stitch

#endif
