#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "nilspec/error.hpp"
#include "nilspec/linalg.hpp"
#include "nilspec/matrix.hpp"

namespace nilspec {

/// Full-rank lattice in z = R^k, given by a k x k matrix whose columns are
/// the generators in standard coordinates.
class LatticeBasis {
 public:
  explicit LatticeBasis(Matrix basis) : basis_(std::move(basis)) {
    basis_.require_square("LatticeBasis");
    if (basis_.rows() == 0) throw ShapeError("LatticeBasis: k must be positive");
    if (std::abs(determinant(basis_)) < 1e-10 * scale_of(basis_))
      throw DomainError("LatticeBasis: generators are linearly dependent");
    inverse_ = inverse(basis_);
  }

  static LatticeBasis standard(std::size_t k) { return LatticeBasis(Matrix::identity(k)); }

  std::size_t k() const { return basis_.rows(); }
  const Matrix& basis() const { return basis_; }
  Matrix gram() const { return basis_.transpose() * basis_; }

  /// Representative of z + L in the half-open parallelepiped
  /// { B c : c in [0,1)^k }.
  Vector reduce(std::span<const double> z) const {
    require_length(z, k(), "LatticeBasis::reduce");
    Vector c = inverse_ * z;
    for (double& ci : c) {
      ci -= std::floor(ci);
      if (ci >= 1.0) ci = 0.0;
    }
    return basis_ * c;
  }

 private:
  Matrix basis_;
  Matrix inverse_;
};

/// All orthogonal C with C(L) = L.
///
/// Any such C sends the generator b_i to a lattice vector of the same length,
/// so candidates are integer combinations n with n^T G n = G_ii, bounded by
/// |n_j| <= sqrt(G_ii (G^-1)_jj). Assignments that reproduce the whole Gram
/// matrix give C = B N B^-1. The identity is listed first.
inline std::vector<Matrix> lattice_automorphisms(const LatticeBasis& L, double rel_tol = 1e-9) {
  const std::size_t k = L.k();
  if (k > 4) throw DomainError("lattice_automorphisms: supported for k <= 4");
  const Matrix G = L.gram();
  const Matrix Ginv = inverse(G);
  const double tol = rel_tol * scale_of(max_abs(G));

  const auto gram_pair = [&](const std::vector<long long>& x, const std::vector<long long>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        s += static_cast<double>(x[i]) * G(i, j) * static_cast<double>(y[j]);
    return s;
  };

  // Candidate images of each generator.
  std::vector<std::vector<std::vector<long long>>> candidates(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<long long> bound(k);
    for (std::size_t j = 0; j < k; ++j)
      bound[j] = static_cast<long long>(std::floor(std::sqrt(G(i, i) * Ginv(j, j)) + 1e-9));
    std::vector<long long> n(k);
    for (std::size_t j = 0; j < k; ++j) n[j] = -bound[j];
    for (;;) {
      if (std::abs(gram_pair(n, n) - G(i, i)) <= tol) candidates[i].push_back(n);
      std::size_t pos = 0;
      while (pos < k && ++n[pos] > bound[pos]) {
        n[pos] = -bound[pos];
        ++pos;
      }
      if (pos == k) break;
    }
  }

  std::vector<Matrix> out;
  std::vector<std::vector<long long>> chosen(k);
  const auto search = [&](auto&& self, std::size_t i) -> void {
    if (i == k) {
      Matrix N(k, k);
      for (std::size_t c = 0; c < k; ++c)
        for (std::size_t r = 0; r < k; ++r) N(r, c) = static_cast<double>(chosen[c][r]);
      out.push_back(L.basis() * N * inverse(L.basis()));
      return;
    }
    for (const auto& cand : candidates[i]) {
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j)
        ok = std::abs(gram_pair(chosen[j], cand) - G(j, i)) <= tol;
      if (!ok) continue;
      chosen[i] = cand;
      self(self, i + 1);
    }
  };
  search(search, 0);

  const Matrix I = Matrix::identity(k);
  std::stable_partition(out.begin(), out.end(),
                        [&](const Matrix& C) { return frobenius_norm(C - I) <= 1e-9; });
  return out;
}

}  // namespace nilspec
