#pragma once

// Exact matrices over Q_p, normal forms over Z_p, lattices and subspaces.

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "nonarch/padic.hpp"

namespace nonarch {

struct rank_error : std::domain_error {
  using std::domain_error::domain_error;
};

struct dimension_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Largest matrix dimension accepted at the API boundary.
inline constexpr std::size_t kMaxDim = 8;

using Vector = std::vector<Scalar>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  static Matrix diagonal(const Vector& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }
  static Matrix from_rows(const std::vector<Vector>& rows) {
    if (rows.empty()) return {};
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) throw dimension_error("ragged matrix rows");
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }
  static Matrix from_rows(std::initializer_list<std::initializer_list<Scalar>> rows) {
    std::vector<Vector> v;
    for (const auto& r : rows) v.emplace_back(r);
    return from_rows(v);
  }
  static Matrix from_columns(const std::vector<Vector>& cols, std::size_t n) {
    Matrix m(n, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != n) throw dimension_error("column length mismatch");
      for (std::size_t i = 0; i < n; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vector column(std::size_t j) const {
    Vector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  void set_column(std::size_t j, const Vector& v) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }
  std::vector<Vector> columns() const {
    std::vector<Vector> out;
    out.reserve(cols_);
    for (std::size_t j = 0; j < cols_; ++j) out.push_back(column(j));
    return out;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  /// row[dst] += factor * row[src]
  void add_row(std::size_t dst, std::size_t src, const Scalar& factor) {
    if (factor.is_zero()) return;
    for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += factor * (*this)(src, j);
  }
  void add_col(std::size_t dst, std::size_t src, const Scalar& factor) {
    if (factor.is_zero()) return;
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += factor * (*this)(i, src);
  }
  void scale_row(std::size_t r, const Scalar& factor) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) *= factor;
  }
  void scale_col(std::size_t c, const Scalar& factor) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, c) *= factor;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw dimension_error("matrix product shape mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Scalar& aik = a(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    }
    return c;
  }
  friend Vector operator*(const Matrix& a, const Vector& x) {
    if (a.cols_ != x.size()) throw dimension_error("matrix-vector shape mismatch");
    Vector y(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j)
        if (!x[j].is_zero()) y[i] += a(i, j) * x[j];
    return y;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw dimension_error("matrix sum shape mismatch");
    for (std::size_t k = 0; k < a.data_.size(); ++k) a.data_[k] += b.data_[k];
    return a;
  }
  friend Matrix operator-(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw dimension_error("matrix difference shape mismatch");
    for (std::size_t k = 0; k < a.data_.size(); ++k) a.data_[k] -= b.data_[k];
    return a;
  }
  friend Matrix operator*(const Scalar& s, Matrix a) {
    for (auto& x : a.data_) x *= s;
    return a;
  }

  /// Lexicographic order on (shape, entries); used for canonical sorting.
  friend bool operator<(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_) return a.rows_ < b.rows_;
    if (a.cols_ != b.cols_) return a.cols_ < b.cols_;
    return std::lexicographical_compare(a.data_.begin(), a.data_.end(), b.data_.begin(), b.data_.end());
  }

  const std::vector<Scalar>& entries() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

inline void check_dim(std::size_t n) {
  if (n == 0 || n > kMaxDim) {
    throw dimension_error("dimension " + std::to_string(n) + " outside supported range 1.." +
                          std::to_string(kMaxDim));
  }
}

inline Scalar det(const Matrix& m) {
  if (!m.is_square()) throw dimension_error("determinant of a non-square matrix");
  Matrix a = m;
  const std::size_t n = a.rows();
  Scalar d = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && a(piv, k).is_zero()) ++piv;
    if (piv == n) return 0;
    if (piv != k) {
      a.swap_rows(piv, k);
      d = -d;
    }
    d *= a(k, k);
    const Scalar inv_p = a(k, k).inv();
    for (std::size_t i = k + 1; i < n; ++i) a.add_row(i, k, -(a(i, k) * inv_p));
  }
  return d;
}

inline Matrix inverse(const Matrix& m) {
  if (!m.is_square()) throw dimension_error("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  Matrix a = m;
  Matrix r = Matrix::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && a(piv, k).is_zero()) ++piv;
    if (piv == n) throw rank_error("matrix is singular");
    a.swap_rows(piv, k);
    r.swap_rows(piv, k);
    const Scalar s = a(k, k).inv();
    a.scale_row(k, s);
    r.scale_row(k, s);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a(i, k).is_zero()) continue;
      const Scalar f = -a(i, k);
      a.add_row(i, k, f);
      r.add_row(i, k, f);
    }
  }
  return r;
}

inline Matrix mat_pow(const Matrix& m, long e) {
  if (e < 0) return mat_pow(inverse(m), -e);
  Matrix result = Matrix::identity(m.rows());
  Matrix base = m;
  while (e > 0) {
    if (e & 1) result = result * base;
    base = base * base;
    e >>= 1;
  }
  return result;
}

/// Characteristic polynomial det(tI - M) by Faddeev-LeVerrier. Coefficients
/// are returned in ascending degree: c[0] + c[1] t + ... + c[n] t^n, c[n] = 1.
inline std::vector<Scalar> char_poly(const Matrix& m) {
  if (!m.is_square()) throw dimension_error("characteristic polynomial of a non-square matrix");
  const std::size_t n = m.rows();
  std::vector<Scalar> c(n + 1);
  c[n] = 1;
  Matrix mk(n, n);  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    mk = m * mk + c[n - k + 1] * Matrix::identity(n);
    const Matrix amk = m * mk;
    Scalar tr;
    for (std::size_t i = 0; i < n; ++i) tr += amk(i, i);
    c[n - k] = -tr / Scalar(static_cast<long>(k));
  }
  return c;
}

/// Minimal valuation over all entries; +inf for the zero matrix.
inline Valuation min_entry_valuation(const FieldSpec& f, const Matrix& m) {
  Valuation best = Valuation::infinity();
  for (const auto& x : m.entries()) best = std::min(best, val(f, x));
  return best;
}

/// True when every entry lies in Z_p.
inline bool is_integral(const FieldSpec& f, const Matrix& m) {
  const Valuation v = min_entry_valuation(f, m);
  return v.is_infinite() || v.value() >= 0;
}

/// True when m lies in GL_n(Z_p).
inline bool in_gl_zp(const FieldSpec& f, const Matrix& m) {
  if (!m.is_square() || !is_integral(f, m)) return false;
  const Scalar d = det(m);
  return !d.is_zero() && val(f, d).value() == 0;
}

struct SNFResult {
  std::vector<long> exponents;  // non-decreasing
  Matrix left;                  // in GL_n(Z_p)
  Matrix right;                 // in GL_n(Z_p)
};

/// Smith normal form over Z_p of an invertible matrix:
/// left * m * right = diag(p^{a_1}, ..., p^{a_n}).
inline SNFResult snf_zp(const FieldSpec& f, const Matrix& m) {
  if (!m.is_square()) throw dimension_error("snf_zp requires a square matrix");
  check_dim(m.rows());
  const std::size_t n = m.rows();
  Matrix a = m;
  Matrix left = Matrix::identity(n);
  Matrix right = Matrix::identity(n);
  std::vector<long> exps(n);
  for (std::size_t k = 0; k < n; ++k) {
    // Pivot: minimal valuation, first in row-major order.
    std::size_t pi = n, pj = n;
    Valuation best = Valuation::infinity();
    for (std::size_t i = k; i < n; ++i) {
      for (std::size_t j = k; j < n; ++j) {
        const Valuation v = val(f, a(i, j));
        if (v < best) {
          best = v;
          pi = i;
          pj = j;
        }
      }
    }
    if (best.is_infinite()) throw rank_error("snf_zp: matrix is singular");
    a.swap_rows(k, pi);
    left.swap_rows(k, pi);
    a.swap_cols(k, pj);
    right.swap_cols(k, pj);
    const Scalar unit = p_power(f, best.value()) / a(k, k);
    a.scale_row(k, unit);
    left.scale_row(k, unit);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k).is_zero()) continue;
      const Scalar factor = -(a(i, k) / a(k, k));
      a.add_row(i, k, factor);
      left.add_row(i, k, factor);
    }
    for (std::size_t j = k + 1; j < n; ++j) {
      if (a(k, j).is_zero()) continue;
      const Scalar factor = -(a(k, j) / a(k, k));
      a.add_col(j, k, factor);
      right.add_col(j, k, factor);
    }
    exps[k] = best.value();
  }
  return {std::move(exps), std::move(left), std::move(right)};
}

/// Canonical column Hermite form over Z_p of the Z_p-span of the columns of g
/// (n rows, any number of columns, full row rank). The result is lower
/// triangular with diagonal p^{a_i}; entry (i, j), j < i, is the canonical
/// residue modulo p^{a_i}.
inline Matrix hermite_zp(const FieldSpec& f, const Matrix& g) {
  const std::size_t n = g.rows();
  check_dim(n);
  Matrix h = g;
  const std::size_t m = h.cols();
  if (m < n) throw rank_error("hermite_zp: fewer generators than the dimension");
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t pj = m;
    Valuation best = Valuation::infinity();
    for (std::size_t j = i; j < m; ++j) {
      const Valuation v = val(f, h(i, j));
      if (v < best) {
        best = v;
        pj = j;
      }
    }
    if (best.is_infinite()) throw rank_error("hermite_zp: generators do not span");
    h.swap_cols(i, pj);
    h.scale_col(i, p_power(f, best.value()) / h(i, i));
    for (std::size_t j = i + 1; j < m; ++j) {
      if (h(i, j).is_zero()) continue;
      h.add_col(j, i, -(h(i, j) / h(i, i)));
    }
  }
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) out(i, j) = h(i, j);
  for (std::size_t i = 0; i < n; ++i) {
    const long level = val(f, out(i, i)).value();
    for (std::size_t j = 0; j < i; ++j) {
      const Scalar excess = out(i, j) - residue_rep(f, out(i, j), level);
      if (!excess.is_zero()) out.add_col(j, i, -(excess / out(i, i)));
    }
  }
  return out;
}

/// A full-rank Z_p-submodule of Q_p^n, stored as its canonical Hermite basis.
class Lattice {
 public:
  Lattice(FieldSpec f, const Matrix& generators) : field_(f), basis_(hermite_zp(f, generators)) {}

  static Lattice standard(FieldSpec f, std::size_t n) { return Lattice(f, Matrix::identity(n)); }

  const FieldSpec& field() const { return field_; }
  const Matrix& basis() const { return basis_; }
  std::size_t dim() const { return basis_.rows(); }

  /// True when other is a sublattice of this one.
  bool contains(const Lattice& other) const { return is_integral(field_, inverse(basis_) * other.basis_); }
  bool contains(const Vector& x) const {
    const Vector c = inverse(basis_) * x;
    return std::all_of(c.begin(), c.end(), [&](const Scalar& s) {
      const Valuation v = val(field_, s);
      return v.is_infinite() || v.value() >= 0;
    });
  }

  Lattice image(const Matrix& g) const { return Lattice(field_, g * basis_); }
  Lattice scaled(long k) const { return Lattice(field_, p_power(field_, k) * basis_); }

  Lattice sum(const Lattice& other) const {
    Matrix g(dim(), 2 * dim());
    for (std::size_t i = 0; i < dim(); ++i) {
      for (std::size_t j = 0; j < dim(); ++j) {
        g(i, j) = basis_(i, j);
        g(i, dim() + j) = other.basis_(i, j);
      }
    }
    return Lattice(field_, g);
  }

  friend bool operator==(const Lattice& a, const Lattice& b) { return a.basis_ == b.basis_; }

 private:
  FieldSpec field_;
  Matrix basis_;
};

/// A linear subspace of Q_p^n in reduced column-echelon form: pivot rows
/// increase from left to right, each pivot is 1, and every other basis
/// column vanishes in that row.
struct Subspace {
  std::size_t ambient = 0;
  std::size_t dim = 0;
  Matrix basis;  // ambient x dim
  std::vector<std::size_t> pivot_rows;

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient == b.ambient && a.dim == b.dim && a.basis == b.basis;
  }
};

inline Subspace echelon_span(std::size_t ambient, const std::vector<Vector>& vectors) {
  // Row-reduce with the vectors as rows, then read the RREF as columns.
  std::vector<Vector> rows;
  for (const auto& v : vectors) {
    if (v.size() != ambient) throw dimension_error("echelon_span: vector length mismatch");
    rows.push_back(v);
  }
  std::size_t r = 0;
  std::vector<std::size_t> pivots;
  for (std::size_t c = 0; c < ambient && r < rows.size(); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][c].is_zero()) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[r], rows[piv]);
    const Scalar s = rows[r][c].inv();
    for (auto& x : rows[r]) x *= s;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c].is_zero()) continue;
      const Scalar factor = rows[i][c];
      for (std::size_t k = 0; k < ambient; ++k) rows[i][k] -= factor * rows[r][k];
    }
    pivots.push_back(c);
    ++r;
  }
  Subspace s;
  s.ambient = ambient;
  s.dim = r;
  s.basis = Matrix(ambient, r);
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = 0; i < ambient; ++i) s.basis(i, j) = rows[j][i];
  s.pivot_rows = std::move(pivots);
  return s;
}

}  // namespace nonarch
