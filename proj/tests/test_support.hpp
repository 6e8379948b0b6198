#pragma once

// Shared fixtures and independent oracles for the test suites. Nothing here
// calls into the code path it is used to check.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "nilspec/nilspec.hpp"

namespace nilspec::testing {

/// The Ricci matrix of the reference family (a = (1,2,3), b = (0,1,0)) as a
/// literal transcription of its published closed form, valid for u in [0, 1/8].
inline Matrix published_ricci(double u) {
  const double r1 = std::sqrt(5 * u - 40 * u * u);
  const double r2 = std::sqrt(3 * u - 24 * u * u);
  const double s15 = std::sqrt(15.0) * u;
  Matrix m{{2 - 5 * u, 0, r1, 0, -s15, 0},
           {0, 1, 0, 0, 0, 0},
           {r1, 0, 4 + 8 * u, 0, r2, 0},
           {0, 0, 0, 4, 0, 0},
           {-s15, 0, r2, 0, 10 - 3 * u, 0},
           {0, 0, 0, 0, 0, 9}};
  return -0.5 * m;
}

inline SkewPencil reference_pencil(double u = 0.0) {
  return family_pencil(deform(reference_family(), u));
}

inline SkewPencil abelian_pencil(std::size_t m, std::size_t k) {
  return SkewPencil(std::vector<Matrix>(k, Matrix(m, m)));
}

inline Matrix random_skew(std::size_t m, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Matrix s(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      s(i, j) = g(rng);
      s(j, i) = -s(i, j);
    }
  return s;
}

inline SkewPencil random_pencil(std::size_t m, std::size_t k, std::mt19937_64& rng) {
  std::vector<Matrix> js;
  for (std::size_t i = 0; i < k; ++i) js.push_back(random_skew(m, rng));
  return SkewPencil(std::move(js));
}

inline Matrix random_symmetric(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix s(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) s(i, j) = s(j, i) = g(rng);
  return s;
}

inline Vector random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v(n);
  for (double& e : v) e = g(rng);
  return v;
}

inline Vector random_unit(std::size_t n, std::mt19937_64& rng) {
  Vector v = random_vector(n, rng);
  return (1.0 / norm(v)) * v;
}

/// Orthonormal pair by Gram-Schmidt of two Gaussian vectors.
inline std::pair<Vector, Vector> random_orthonormal_pair(std::size_t n, std::mt19937_64& rng) {
  Vector x = random_unit(n, rng);
  Vector y = random_vector(n, rng);
  y = y - dot(x, y) * x;
  y = (1.0 / norm(y)) * y;
  return {x, y};
}

/// Orthogonal matrix via modified Gram-Schmidt on a Gaussian matrix
/// (independent of the polar construction in the library).
inline Matrix random_orthogonal_mgs(std::size_t n, std::mt19937_64& rng) {
  std::vector<Vector> cols;
  while (cols.size() < n) {
    Vector v = random_vector(n, rng);
    for (const auto& q : cols) v = v - dot(v, q) * q;
    const double nv = norm(v);
    if (nv < 1e-6) continue;
    cols.push_back((1.0 / nv) * v);
  }
  Matrix q(n, n);
  for (std::size_t j = 0; j < n; ++j) q.set_col(j, cols[j]);
  return q;
}

/// Product of monic polynomials given by their coefficient lists (highest first).
inline std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

/// prod_i (lambda - roots[i]).
inline std::vector<double> poly_from_roots(const std::vector<double>& roots) {
  std::vector<double> p{1.0};
  for (double r : roots) p = poly_mul(p, {1.0, -r});
  return p;
}

/// Numerical rank by Gaussian elimination with full pivoting.
inline std::size_t gaussian_rank(Matrix a, double rel_tol = 1e-9) {
  const double cutoff = rel_tol * std::max(1.0, frobenius_norm(a));
  std::size_t rank = 0;
  const std::size_t rows = a.rows(), cols = a.cols();
  std::vector<bool> used_row(rows, false), used_col(cols, false);
  for (;;) {
    double best = 0.0;
    std::size_t pr = 0, pc = 0;
    for (std::size_t r = 0; r < rows; ++r) {
      if (used_row[r]) continue;
      for (std::size_t c = 0; c < cols; ++c)
        if (!used_col[c] && std::abs(a(r, c)) > best) {
          best = std::abs(a(r, c));
          pr = r;
          pc = c;
        }
    }
    if (best <= cutoff) break;
    used_row[pr] = used_col[pc] = true;
    ++rank;
    for (std::size_t r = 0; r < rows; ++r) {
      if (used_row[r]) continue;
      const double f = a(r, pc) / a(pr, pc);
      for (std::size_t c = 0; c < cols; ++c) a(r, c) -= f * a(pr, c);
    }
  }
  return rank;
}

/// Commutant dimension by brute force: build the linear conditions
/// X J_i - J_i X = 0 entry by entry from the defining sum and eliminate.
inline std::size_t commutant_dimension_oracle(const SkewPencil& p) {
  const std::size_t m = p.m();
  std::vector<Vector> rows;
  for (const auto& J : p.generators())
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < m; ++c) {
        Vector row(m * m, 0.0);
        // Coefficient of X(s, t) in (XJ - JX)(r, c).
        for (std::size_t s = 0; s < m; ++s)
          for (std::size_t t = 0; t < m; ++t) {
            double coeff = 0.0;
            if (s == r) coeff += J(t, c);
            if (t == c) coeff -= J(r, s);
            row[s * m + t] = coeff;
          }
        rows.push_back(row);
      }
  Matrix a(rows.size(), m * m);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < m * m; ++j) a(i, j) = rows[i][j];
  return m * m - gaussian_rank(a);
}

/// Orthogonal lattice automorphisms by exhaustive search over integer
/// matrices N with entries in [-bound, bound]: C = B N B^-1 must be orthogonal.
inline std::size_t lattice_automorphism_count_oracle(const Matrix& basis, int bound = 2) {
  const std::size_t k = basis.rows();
  const Matrix binv = inverse(basis);
  std::size_t count = 0;
  std::vector<int> n(k * k, -bound);
  for (;;) {
    Matrix N(k, k);
    for (std::size_t i = 0; i < k * k; ++i) N(i / k, i % k) = n[i];
    const Matrix C = basis * N * binv;
    if (orthogonality_defect(C) < 1e-9) ++count;
    std::size_t pos = 0;
    while (pos < n.size() && ++n[pos] > bound) n[pos++] = -bound;
    if (pos == n.size()) break;
  }
  return count;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) { return max_abs(a - b); }

inline double max_abs_diff(const Vector& a, const Vector& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace nilspec::testing
