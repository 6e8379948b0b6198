#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nilspec/error.hpp"
#include "nilspec/tolerances.hpp"

namespace nilspec {

using Vector = std::vector<double>;

/// Dense row-major matrix over a field-like scalar `T`.
///
/// `T` is `double` for all geometry; the characteristic polynomial code also
/// instantiates it with an exact rational type.
template <typename T>
class BasicMatrix {
 public:
  using value_type = T;

  BasicMatrix() = default;

  BasicMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols, T(0)) {}

  BasicMatrix(std::size_t rows, std::size_t cols, std::vector<T> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) {
      throw ShapeError("matrix entries: expected " + std::to_string(rows_ * cols_) +
                       " values, got " + std::to_string(entries_.size()));
    }
  }

  /// Row-wise literal, e.g. `Matrix{{0, 1}, {1, 0}}`.
  BasicMatrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    entries_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw ShapeError("ragged matrix literal");
      entries_.insert(entries_.end(), r.begin(), r.end());
    }
  }

  static BasicMatrix identity(std::size_t n) {
    BasicMatrix I(n, n);
    for (std::size_t i = 0; i < n; ++i) I(i, i) = T(1);
    return I;
  }

  static BasicMatrix diagonal(std::span<const T> d) {
    BasicMatrix D(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) D(i, i) = d[i];
    return D;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  const std::vector<T>& entries() const { return entries_; }

  std::vector<T> col(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(entries_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                          entries_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }
  void set_col(std::size_t j, std::span<const T> c) {
    if (c.size() != rows_) throw ShapeError("set_col: length mismatch");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = c[i];
  }

  BasicMatrix transpose() const {
    BasicMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  T trace() const {
    require_square("trace");
    T s(0);
    for (std::size_t i = 0; i < rows_; ++i) s += (*this)(i, i);
    return s;
  }

  BasicMatrix& operator+=(const BasicMatrix& o) {
    require_same_shape(o, "+");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += o.entries_[i];
    return *this;
  }
  BasicMatrix& operator-=(const BasicMatrix& o) {
    require_same_shape(o, "-");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= o.entries_[i];
    return *this;
  }
  BasicMatrix& operator*=(const T& s) {
    for (auto& e : entries_) e *= s;
    return *this;
  }

  friend BasicMatrix operator+(BasicMatrix a, const BasicMatrix& b) { return a += b; }
  friend BasicMatrix operator-(BasicMatrix a, const BasicMatrix& b) { return a -= b; }
  friend BasicMatrix operator*(BasicMatrix a, const T& s) { return a *= s; }
  friend BasicMatrix operator*(const T& s, BasicMatrix a) { return a *= s; }
  friend BasicMatrix operator-(BasicMatrix a) { return a *= T(-1); }

  friend BasicMatrix operator*(const BasicMatrix& a, const BasicMatrix& b) {
    if (a.cols_ != b.rows_) throw ShapeError("matrix product: inner dimensions differ");
    BasicMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t l = 0; l < a.cols_; ++l) {
        const T& ail = a(i, l);
        if (ail == T(0)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += ail * b(l, j);
      }
    return c;
  }

  friend std::vector<T> operator*(const BasicMatrix& a, std::span<const T> v) {
    if (a.cols_ != v.size()) throw ShapeError("matrix-vector product: length mismatch");
    std::vector<T> r(a.rows_, T(0));
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) r[i] += a(i, j) * v[j];
    return r;
  }
  friend std::vector<T> operator*(const BasicMatrix& a, const std::vector<T>& v) {
    return a * std::span<const T>(v);
  }

  friend bool operator==(const BasicMatrix&, const BasicMatrix&) = default;

  void require_square(const char* what) const {
    if (!is_square()) {
      throw ShapeError(std::string(what) + ": matrix is " + std::to_string(rows_) + "x" +
                       std::to_string(cols_) + ", expected square");
    }
  }

 private:
  void require_same_shape(const BasicMatrix& o, const char* op) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
      throw ShapeError(std::string("matrix ") + op + ": shape mismatch");
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> entries_;
};

using Matrix = BasicMatrix<double>;

// ---------------------------------------------------------------------------
// Real-valued helpers.

inline double frobenius_norm(const Matrix& m) {
  double s = 0.0;
  for (double e : m.entries()) s += e * e;
  return std::sqrt(s);
}

inline double scale_of(const Matrix& m) { return scale_of(frobenius_norm(m)); }

inline double max_abs(const Matrix& m) {
  double s = 0.0;
  for (double e : m.entries()) s = std::max(s, std::abs(e));
  return s;
}

inline bool is_symmetric(const Matrix& m, double rel_tol = kDefaultTolerances.structural) {
  if (!m.is_square()) return false;
  const double tol = rel_tol * scale_of(m);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j)
      if (std::abs(m(i, j) - m(j, i)) > tol) return false;
  return true;
}

inline bool is_skew(const Matrix& m, double rel_tol = kDefaultTolerances.structural) {
  if (!m.is_square()) return false;
  const double tol = rel_tol * scale_of(m);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j)
      if (std::abs(m(i, j) + m(j, i)) > tol) return false;
  return true;
}

inline double orthogonality_defect(const Matrix& m) {
  return frobenius_norm(m.transpose() * m - Matrix::identity(m.cols()));
}

inline bool is_orthogonal(const Matrix& m, double tol = kDefaultTolerances.orthogonal) {
  return m.is_square() && orthogonality_defect(m) <= tol;
}

inline void require_symmetric(const Matrix& m, const char* what) {
  m.require_square(what);
  if (!is_symmetric(m)) throw ShapeError(std::string(what) + ": matrix is not symmetric");
}

inline void require_skew(const Matrix& m, const char* what) {
  m.require_square(what);
  if (!is_skew(m)) throw ShapeError(std::string(what) + ": matrix is not skew-symmetric");
}

inline void require_orthogonal(const Matrix& m, const char* what) {
  if (!is_orthogonal(m)) throw ShapeError(std::string(what) + ": matrix is not orthogonal");
}

// Vector helpers. Lengths are the caller's contract; mismatches throw.

inline void require_length(std::span<const double> v, std::size_t n, const char* what) {
  if (v.size() != n) {
    throw ShapeError(std::string(what) + ": expected length " + std::to_string(n) + ", got " +
                     std::to_string(v.size()));
  }
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  require_length(b, a.size(), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline Vector unit_vector(std::size_t n, std::size_t i) {
  Vector e(n, 0.0);
  e[i] = 1.0;
  return e;
}

inline Vector operator+(Vector a, std::span<const double> b) {
  require_length(b, a.size(), "vector +");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}
inline Vector operator-(Vector a, std::span<const double> b) {
  require_length(b, a.size(), "vector -");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}
inline Vector operator*(double s, Vector a) {
  for (double& e : a) e *= s;
  return a;
}

inline double max_abs(std::span<const double> v) {
  double s = 0.0;
  for (double e : v) s = std::max(s, std::abs(e));
  return s;
}

/// `x^T M y`.
inline double bilinear(const Matrix& m, std::span<const double> x, std::span<const double> y) {
  require_length(x, m.rows(), "bilinear");
  require_length(y, m.cols(), "bilinear");
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) s += x[i] * m(i, j) * y[j];
  return s;
}

/// Copies `block` into `m` with its top-left corner at (r0, c0).
template <typename T>
void set_block(BasicMatrix<T>& m, std::size_t r0, std::size_t c0, const BasicMatrix<T>& block) {
  if (r0 + block.rows() > m.rows() || c0 + block.cols() > m.cols())
    throw ShapeError("set_block: block does not fit");
  for (std::size_t i = 0; i < block.rows(); ++i)
    for (std::size_t j = 0; j < block.cols(); ++j) m(r0 + i, c0 + j) = block(i, j);
}

template <typename T>
BasicMatrix<T> block(const BasicMatrix<T>& m, std::size_t r0, std::size_t c0, std::size_t rows,
                     std::size_t cols) {
  if (r0 + rows > m.rows() || c0 + cols > m.cols()) throw ShapeError("block: out of range");
  BasicMatrix<T> b(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) b(i, j) = m(r0 + i, c0 + j);
  return b;
}

}  // namespace nilspec
