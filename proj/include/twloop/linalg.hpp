#ifndef TWLOOP_LINALG_HPP
#define TWLOOP_LINALG_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "twloop/scalar.hpp"

namespace twloop {

/// Sparse vector: strictly increasing indices, no zero entries.
using SparseVec = std::vector<std::pair<int, Scalar>>;
using DenseMat = std::vector<std::vector<Scalar>>;

inline void sv_clean(SparseVec& v) {
  std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  SparseVec out;
  out.reserve(v.size());
  for (auto& [i, c] : v) {
    if (!out.empty() && out.back().first == i) {
      out.back().second += c;
    } else {
      out.emplace_back(i, std::move(c));
    }
  }
  std::erase_if(out, [](const auto& e) { return e.second.is_zero(); });
  v = std::move(out);
}

/// y += c * x
inline void sv_axpy(SparseVec& y, const Scalar& c, const SparseVec& x) {
  if (c.is_zero() || x.empty()) return;
  SparseVec out;
  out.reserve(y.size() + x.size());
  std::size_t i = 0, j = 0;
  while (i < y.size() || j < x.size()) {
    if (j == x.size() || (i < y.size() && y[i].first < x[j].first)) {
      out.push_back(std::move(y[i++]));
    } else if (i == y.size() || x[j].first < y[i].first) {
      out.emplace_back(x[j].first, c * x[j].second);
      ++j;
    } else {
      Scalar s = y[i].second + c * x[j].second;
      if (!s.is_zero()) out.emplace_back(y[i].first, std::move(s));
      ++i;
      ++j;
    }
  }
  y = std::move(out);
}

inline SparseVec sv_scale(SparseVec v, const Scalar& c) {
  if (c.is_zero()) return {};
  for (auto& e : v) e.second *= c;
  return v;
}

inline Scalar sv_get(const SparseVec& v, int i) {
  auto it = std::lower_bound(v.begin(), v.end(), i,
                             [](const auto& e, int k) { return e.first < k; });
  if (it != v.end() && it->first == i) return it->second;
  return Scalar(0);
}

/// Incrementally built echelon basis of a subspace.  Each stored row has its
/// pivot as first index with coefficient 1.
class EchelonBasis {
 public:
  /// Reduces v against the stored rows; the remainder has no pivot entries.
  SparseVec reduce(SparseVec v) const {
    if (rows_.empty()) return v;
    std::size_t pos = 0;
    while (pos < v.size()) {
      int idx = v[pos].first;
      auto it = rows_.find(idx);
      if (it == rows_.end()) {
        ++pos;
        continue;
      }
      Scalar c = -v[pos].second;
      sv_axpy(v, c, it->second);
      // entries before pos are untouched; the pivot entry vanished
    }
    return v;
  }

  /// Adds v to the span; returns true if the dimension grew.
  bool insert(SparseVec v) {
    v = reduce(std::move(v));
    if (v.empty()) return false;
    Scalar inv = v.front().second.inverse();
    for (auto& e : v) e.second *= inv;
    rows_.emplace(v.front().first, std::move(v));
    return true;
  }

  bool contains(const SparseVec& v) const { return reduce(v).empty(); }
  std::size_t rank() const { return rows_.size(); }
  bool is_pivot(int i) const { return rows_.count(i) != 0; }
  const std::map<int, SparseVec>& rows() const { return rows_; }

 private:
  std::map<int, SparseVec> rows_;
};

inline DenseMat zero_matrix(std::size_t r, std::size_t c) {
  return DenseMat(r, std::vector<Scalar>(c, Scalar(0)));
}

inline DenseMat identity_matrix(std::size_t n) {
  DenseMat m = zero_matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

/// In-place reduced row echelon form; returns pivot columns.
inline std::vector<int> rref(DenseMat& a) {
  std::vector<int> piv;
  if (a.empty()) return piv;
  std::size_t rows = a.size(), cols = a[0].size(), r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c].is_zero()) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    Scalar inv = a[r][c].inverse();
    for (std::size_t k = c; k < cols; ++k) a[r][k] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c].is_zero()) continue;
      Scalar f = a[i][c];
      for (std::size_t k = c; k < cols; ++k) {
        if (!a[r][k].is_zero()) a[i][k] -= f * a[r][k];
      }
    }
    piv.push_back(static_cast<int>(c));
    ++r;
  }
  return piv;
}

inline std::size_t matrix_rank(DenseMat a) { return rref(a).size(); }

/// Basis of {x : a x = 0}.
inline std::vector<std::vector<Scalar>> nullspace(DenseMat a, std::size_t cols) {
  std::vector<std::vector<Scalar>> out;
  if (a.empty()) {
    for (std::size_t j = 0; j < cols; ++j) {
      std::vector<Scalar> e(cols, Scalar(0));
      e[j] = 1;
      out.push_back(e);
    }
    return out;
  }
  auto piv = rref(a);
  std::vector<bool> is_piv(cols, false);
  for (int p : piv) is_piv[p] = true;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_piv[f]) continue;
    std::vector<Scalar> x(cols, Scalar(0));
    x[f] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = -a[r][f];
    out.push_back(std::move(x));
  }
  return out;
}

inline std::optional<DenseMat> matrix_inverse(const DenseMat& a) {
  std::size_t n = a.size();
  DenseMat aug = zero_matrix(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = a[i][j];
    aug[i][n + i] = 1;
  }
  auto piv = rref(aug);
  if (piv.size() < n || piv[n - 1] != static_cast<int>(n - 1)) return std::nullopt;
  DenseMat inv = zero_matrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

inline DenseMat mat_mul(const DenseMat& a, const DenseMat& b) {
  std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  DenseMat c = zero_matrix(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      if (a[i][l].is_zero()) continue;
      for (std::size_t j = 0; j < m; ++j)
        if (!b[l][j].is_zero()) c[i][j] += a[i][l] * b[l][j];
    }
  return c;
}

/// Sparse square matrix stored by columns: col[j] = image of basis vector j.
struct SparseMat {
  int n = 0;
  std::vector<SparseVec> col;

  SparseMat() = default;
  explicit SparseMat(int dim) : n(dim), col(static_cast<std::size_t>(dim)) {}

  SparseVec apply(const SparseVec& v) const {
    SparseVec out;
    for (const auto& [j, c] : v) sv_axpy(out, c, col[static_cast<std::size_t>(j)]);
    return out;
  }
  bool is_zero() const {
    return std::all_of(col.begin(), col.end(), [](const SparseVec& c) { return c.empty(); });
  }
  SparseMat& axpy(const Scalar& c, const SparseMat& o) {
    for (int j = 0; j < n; ++j) sv_axpy(col[static_cast<std::size_t>(j)], c, o.col[static_cast<std::size_t>(j)]);
    return *this;
  }
  friend SparseMat operator*(const SparseMat& a, const SparseMat& b) {
    SparseMat c(a.n);
    for (int j = 0; j < b.n; ++j) c.col[static_cast<std::size_t>(j)] = a.apply(b.col[static_cast<std::size_t>(j)]);
    return c;
  }
  friend bool operator==(const SparseMat& a, const SparseMat& b) { return a.n == b.n && a.col == b.col; }
  static SparseMat commutator(const SparseMat& a, const SparseMat& b) {
    SparseMat c = a * b;
    c.axpy(Scalar(-1), b * a);
    return c;
  }
};

}  // namespace twloop

#endif
