#pragma once

#include <cassert>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "reflekt/rng.hpp"

namespace reflekt {

// Dense matrix over an exact field F (reflekt::Fp or reflekt::QQ).
// Rows index the target, columns the source, so composition is matrix product.
template <class F>
struct Mat {
  using Elem = typename F::Elem;
  int rows = 0, cols = 0;
  std::vector<Elem> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

  Elem& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  const Elem& at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
};

template <class F>
Mat<F> mat_zero(const F&, int r, int c) {
  return Mat<F>(r, c);
}

template <class F>
Mat<F> mat_id(const F& k, int n) {
  Mat<F> m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = k.one();
  return m;
}

template <class F>
bool mat_eq(const F& k, const Mat<F>& x, const Mat<F>& y) {
  if (x.rows != y.rows || x.cols != y.cols) return false;
  for (size_t i = 0; i < x.a.size(); ++i)
    if (!k.eq(x.a[i], y.a[i])) return false;
  return true;
}

template <class F>
bool mat_is_zero(const F& k, const Mat<F>& x) {
  for (auto& e : x.a)
    if (!k.is_zero(e)) return false;
  return true;
}

template <class F>
Mat<F> mat_mul(const F& k, const Mat<F>& x, const Mat<F>& y) {
  if (x.cols != y.rows) throw std::invalid_argument("mat_mul: shape mismatch");
  Mat<F> r(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int l = 0; l < x.cols; ++l) {
      if (k.is_zero(x.at(i, l))) continue;
      for (int j = 0; j < y.cols; ++j)
        r.at(i, j) = k.add(r.at(i, j), k.mul(x.at(i, l), y.at(l, j)));
    }
  return r;
}

template <class F>
Mat<F> mat_add(const F& k, const Mat<F>& x, const Mat<F>& y) {
  if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("mat_add: shape mismatch");
  Mat<F> r = x;
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = k.add(r.a[i], y.a[i]);
  return r;
}

template <class F>
Mat<F> mat_sub(const F& k, const Mat<F>& x, const Mat<F>& y) {
  if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("mat_sub: shape mismatch");
  Mat<F> r = x;
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = k.sub(r.a[i], y.a[i]);
  return r;
}

template <class F>
Mat<F> mat_neg(const F& k, const Mat<F>& x) {
  Mat<F> r = x;
  for (auto& e : r.a) e = k.neg(e);
  return r;
}

template <class F>
Mat<F> mat_scale(const F& k, const typename F::Elem& c, const Mat<F>& x) {
  Mat<F> r = x;
  for (auto& e : r.a) e = k.mul(c, e);
  return r;
}

// [x | y]
template <class F>
Mat<F> hcat(const F&, const Mat<F>& x, const Mat<F>& y) {
  if (x.rows != y.rows) throw std::invalid_argument("hcat: row mismatch");
  Mat<F> r(x.rows, x.cols + y.cols);
  for (int i = 0; i < x.rows; ++i) {
    for (int j = 0; j < x.cols; ++j) r.at(i, j) = x.at(i, j);
    for (int j = 0; j < y.cols; ++j) r.at(i, x.cols + j) = y.at(i, j);
  }
  return r;
}

// [x / y]
template <class F>
Mat<F> vcat(const F&, const Mat<F>& x, const Mat<F>& y) {
  if (x.cols != y.cols) throw std::invalid_argument("vcat: col mismatch");
  Mat<F> r(x.rows + y.rows, x.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) r.at(i, j) = x.at(i, j);
  for (int i = 0; i < y.rows; ++i)
    for (int j = 0; j < y.cols; ++j) r.at(x.rows + i, j) = y.at(i, j);
  return r;
}

template <class F>
Mat<F> transpose(const F&, const Mat<F>& x) {
  Mat<F> r(x.cols, x.rows);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) r.at(j, i) = x.at(i, j);
  return r;
}

template <class F>
Mat<F> submatrix_cols(const F&, const Mat<F>& x, const std::vector<int>& cols) {
  Mat<F> r(x.rows, static_cast<int>(cols.size()));
  for (int i = 0; i < x.rows; ++i)
    for (size_t j = 0; j < cols.size(); ++j) r.at(i, static_cast<int>(j)) = x.at(i, cols[j]);
  return r;
}

// In-place reduced row echelon form; returns pivot columns.
template <class F>
std::vector<int> rref(const F& k, Mat<F>& m) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols && row < m.rows; ++col) {
    int sel = -1;
    for (int i = row; i < m.rows; ++i)
      if (!k.is_zero(m.at(i, col))) { sel = i; break; }
    if (sel < 0) continue;
    if (sel != row)
      for (int j = 0; j < m.cols; ++j) std::swap(m.at(sel, j), m.at(row, j));
    auto piv_inv = k.inv(m.at(row, col));
    for (int j = col; j < m.cols; ++j) m.at(row, j) = k.mul(piv_inv, m.at(row, j));
    for (int i = 0; i < m.rows; ++i) {
      if (i == row || k.is_zero(m.at(i, col))) continue;
      auto c = m.at(i, col);
      for (int j = col; j < m.cols; ++j)
        m.at(i, j) = k.sub(m.at(i, j), k.mul(c, m.at(row, j)));
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

template <class F>
int mat_rank(const F& k, Mat<F> m) {
  return static_cast<int>(rref(k, m).size());
}

// Basis of ker(m) as columns of the result (cols = nullity).
template <class F>
Mat<F> kernel_basis(const F& k, Mat<F> m) {
  int n = m.cols;
  auto pivots = rref(k, m);
  std::vector<bool> is_pivot(n, false);
  for (int p : pivots) is_pivot[p] = true;
  std::vector<int> free_cols;
  for (int j = 0; j < n; ++j)
    if (!is_pivot[j]) free_cols.push_back(j);
  Mat<F> basis(n, static_cast<int>(free_cols.size()));
  for (size_t f = 0; f < free_cols.size(); ++f) {
    int fc = free_cols[f];
    basis.at(fc, static_cast<int>(f)) = k.one();
    for (size_t r = 0; r < pivots.size(); ++r)
      basis.at(pivots[r], static_cast<int>(f)) = k.neg(m.at(static_cast<int>(r), fc));
  }
  return basis;
}

// Solve m * x = b for all columns of b simultaneously. Returns x with free
// variables set to zero, or nullopt if inconsistent. *unique is set iff the
// solution is unique (rank == cols).
template <class F>
std::optional<Mat<F>> solve(const F& k, const Mat<F>& m, const Mat<F>& b, bool* unique = nullptr) {
  if (m.rows != b.rows) throw std::invalid_argument("solve: shape mismatch");
  Mat<F> aug = hcat(k, m, b);
  auto pivots = rref(k, aug);
  for (int p : pivots)
    if (p >= m.cols) return std::nullopt;  // pivot in the b-part: inconsistent
  if (unique) *unique = static_cast<int>(pivots.size()) == m.cols;
  Mat<F> x(m.cols, b.cols);
  for (size_t r = 0; r < pivots.size(); ++r)
    for (int j = 0; j < b.cols; ++j) x.at(pivots[r], j) = aug.at(static_cast<int>(r), m.cols + j);
  return x;
}

template <class F>
bool is_invertible(const F& k, const Mat<F>& m) {
  return m.rows == m.cols && mat_rank(k, m) == m.rows;
}

template <class F>
std::optional<Mat<F>> inverse(const F& k, const Mat<F>& m) {
  if (m.rows != m.cols) return std::nullopt;
  bool unique = false;
  auto x = solve(k, m, mat_id(k, m.rows), &unique);
  if (!x || !unique) return std::nullopt;
  return x;
}

// Cokernel of m: F^cols -> F^rows. proj * m = 0, proj has a right inverse sec
// (proj * sec = id), so proj presents F^rows / im(m).
template <class F>
struct Cokernel {
  int dim = 0;
  Mat<F> proj;  // dim x rows
  Mat<F> sec;   // rows x dim
};

template <class F>
Cokernel<F> cokernel(const F& k, const Mat<F>& m) {
  // Row-reduce m^T: its pivot columns are the coordinates spanned by im(m).
  Mat<F> t = transpose(k, m);
  auto pivots = rref(k, t);
  int rank = static_cast<int>(pivots.size());
  std::vector<bool> is_pivot(m.rows, false);
  for (int p : pivots) is_pivot[p] = true;
  std::vector<int> free_coords;
  for (int j = 0; j < m.rows; ++j)
    if (!is_pivot[j]) free_coords.push_back(j);

  Cokernel<F> ck;
  ck.dim = static_cast<int>(free_coords.size());
  ck.proj = Mat<F>(ck.dim, m.rows);
  ck.sec = Mat<F>(m.rows, ck.dim);
  // proj(e_j) for free j is the j-th class; for pivot coordinates subtract the
  // echelon representative: e_{p_r} = row_r + (free part), so the class of
  // e_{p_r} is minus the free part of row_r... rather: row_r of t is an element
  // of im(m) with leading coordinate p_r, hence e_{p_r} = row_r - tail mod im,
  // and class(e_{p_r}) = -class(tail restricted to free coords).
  for (int d = 0; d < ck.dim; ++d) {
    ck.proj.at(d, free_coords[d]) = k.one();
    ck.sec.at(free_coords[d], d) = k.one();
  }
  for (int r = 0; r < rank; ++r) {
    int p = pivots[r];
    for (int d = 0; d < ck.dim; ++d)
      ck.proj.at(d, p) = k.neg(t.at(r, free_coords[d]));
  }
  return ck;
}

template <class F>
Mat<F> random_matrix(const F& k, SplitMix64& rng, int rows, int cols) {
  Mat<F> m(rows, cols);
  for (auto& e : m.a) e = k.random(rng);
  return m;
}

template <class F>
Mat<F> random_invertible(const F& k, SplitMix64& rng, int n) {
  if (n == 0) return Mat<F>(0, 0);
  for (;;) {
    Mat<F> m = random_matrix(k, rng, n, n);
    if (is_invertible(k, m)) return m;
  }
}

template <class F>
std::string mat_str(const F& k, const Mat<F>& m) {
  std::string s = "[";
  for (int i = 0; i < m.rows; ++i) {
    s += "[";
    for (int j = 0; j < m.cols; ++j) {
      s += k.str(m.at(i, j));
      if (j + 1 < m.cols) s += ",";
    }
    s += "]";
    if (i + 1 < m.rows) s += ",";
  }
  return s + "]";
}

}  // namespace reflekt
