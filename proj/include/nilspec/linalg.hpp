#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "nilspec/error.hpp"
#include "nilspec/matrix.hpp"

namespace nilspec {

struct SymEigen {
  Vector values;   ///< ascending
  Matrix vectors;  ///< column i pairs with values[i]
};

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Deterministic; eigenvalues ascending with ties kept in their diagonal
/// order. Throws NumericalError if `max_sweeps` sweeps do not drive the
/// off-diagonal mass below machine precision.
inline SymEigen sym_eigen(const Matrix& s, int max_sweeps = 100) {
  require_symmetric(s, "sym_eigen");
  const std::size_t n = s.rows();
  Matrix a = s;
  Matrix v = Matrix::identity(n);
  const double total = frobenius_norm(s);
  const double eps = std::numeric_limits<double>::epsilon();

  auto off_norm = [&] {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(off);
  };

  int sweep = 0;
  while (off_norm() > eps * total) {
    if (sweep++ >= max_sweeps) throw NumericalError("sym_eigen: Jacobi sweeps did not converge");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation annihilating a(p,q); Golub & Van Loan sym.schur2.
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  SymEigen out{Vector(n), Matrix(n, n)};
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = a(order[c], order[c]);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = v(r, order[c]);
  }
  return out;
}

struct Svd {
  Vector singular_values;  ///< unsorted, paired with columns of `right`
  Matrix right;            ///< orthogonal cols x cols
};

/// One-sided (Hestenes) Jacobi SVD. Small singular values come out with
/// absolute accuracy ~eps*||M||, which the nullspace cut-off relies on.
inline Svd one_sided_svd(const Matrix& m, int max_sweeps = 100) {
  const std::size_t rows = m.rows(), n = m.cols();
  Matrix u = m;
  Matrix v = Matrix::identity(n);
  const double eps = std::numeric_limits<double>::epsilon();
  // Column pairs whose coupling is at rounding level of the whole matrix are
  // left alone; rotating them only shuffles noise and can cycle.
  const double fro = frobenius_norm(m);
  const double negligible = eps * eps * fro * fro;
  for (int sweep = 0;; ++sweep) {
    if (sweep >= max_sweeps) throw NumericalError("one_sided_svd: did not converge");
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
          alpha += u(r, i) * u(r, i);
          beta += u(r, j) * u(r, j);
          gamma += u(r, i) * u(r, j);
        }
        if (std::abs(gamma) <= eps * std::sqrt(alpha * beta) || std::abs(gamma) <= negligible) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t =
            (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t r = 0; r < rows; ++r) {
          const double ui = u(r, i), uj = u(r, j);
          u(r, i) = c * ui - s * uj;
          u(r, j) = s * ui + c * uj;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double vi = v(r, i), vj = v(r, j);
          v(r, i) = c * vi - s * vj;
          v(r, j) = s * vi + c * vj;
        }
      }
    }
    if (!rotated) break;
  }
  Svd out{Vector(n), std::move(v)};
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t r = 0; r < rows; ++r) s += u(r, j) * u(r, j);
    out.singular_values[j] = std::sqrt(s);
  }
  return out;
}

struct Nullspace {
  std::size_t rank = 0;
  std::vector<Vector> basis;  ///< orthonormal
};

/// Right nullspace: directions v with ||M v|| <= tol * ||M||_F.
inline Nullspace nullspace(const Matrix& m, double tol = kDefaultTolerances.spectral) {
  if (!(tol > 0.0)) throw DomainError("nullspace: tolerance must be positive");
  const std::size_t n = m.cols();
  const double cutoff = tol * frobenius_norm(m);
  if (frobenius_norm(m) == 0.0) {
    Nullspace all;
    for (std::size_t j = 0; j < n; ++j) all.basis.push_back(unit_vector(n, j));
    return all;
  }
  const Svd svd = one_sided_svd(m);
  Nullspace out;
  for (std::size_t j = 0; j < n; ++j) {
    if (svd.singular_values[j] <= cutoff) {
      out.basis.push_back(svd.right.col(j));
    } else {
      ++out.rank;
    }
  }
  return out;
}

/// Solves S x = b for symmetric positive definite S by Cholesky.
inline Vector solve_spd(const Matrix& s, std::span<const double> b) {
  s.require_square("solve_spd");
  const std::size_t n = s.rows();
  require_length(b, n, "solve_spd");
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = s(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) throw NumericalError("solve_spd: matrix is not positive definite");
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double x = s(i, j);
      for (std::size_t k = 0; k < j; ++k) x -= l(i, k) * l(j, k);
      l(i, j) = x / l(j, j);
    }
  }
  Vector y(n), x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double r = b[i];
    for (std::size_t k = 0; k < i; ++k) r -= l(i, k) * y[k];
    y[i] = r / l(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    double r = y[i];
    for (std::size_t k = i + 1; k < n; ++k) r -= l(k, i) * x[k];
    x[i] = r / l(i, i);
  }
  return x;
}

/// Orthogonal polar factor M (M^T M)^{-1/2} of a nonsingular square matrix.
inline Matrix polar_factor(const Matrix& m) {
  m.require_square("polar_factor");
  Matrix gram = m.transpose() * m;
  // Symmetrize against rounding before the structural check.
  gram = 0.5 * (gram + gram.transpose());
  const SymEigen e = sym_eigen(gram);
  const std::size_t n = m.rows();
  Vector inv_sqrt(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(e.values[i] > 0.0)) throw NumericalError("polar_factor: singular matrix");
    inv_sqrt[i] = 1.0 / std::sqrt(e.values[i]);
  }
  return m * (e.vectors * Matrix::diagonal(inv_sqrt) * e.vectors.transpose());
}

/// Determinant by partial-pivot elimination.
inline double determinant(Matrix a) {
  a.require_square("determinant");
  const std::size_t n = a.rows();
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    if (a(piv, c) == 0.0) return 0.0;
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(c, j), a(piv, j));
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a(r, c) / a(c, c);
      for (std::size_t j = c; j < n; ++j) a(r, j) -= f * a(c, j);
    }
  }
  return det;
}

/// Inverse by Gauss-Jordan with partial pivoting.
inline Matrix inverse(Matrix a) {
  a.require_square("inverse");
  const std::size_t n = a.rows();
  Matrix inv = Matrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    if (a(piv, c) == 0.0) throw NumericalError("inverse: singular matrix");
    for (std::size_t j = 0; j < n; ++j) {
      std::swap(a(c, j), a(piv, j));
      std::swap(inv(c, j), inv(piv, j));
    }
    const double d = a(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      a(c, j) /= d;
      inv(c, j) /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a(r, c) == 0.0) continue;
      const double f = a(r, c);
      for (std::size_t j = 0; j < n; ++j) {
        a(r, j) -= f * a(c, j);
        inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

}  // namespace nilspec
