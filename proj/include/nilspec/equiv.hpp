#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nilspec/error.hpp"
#include "nilspec/lattice.hpp"
#include "nilspec/linalg.hpp"
#include "nilspec/nilalg.hpp"

namespace nilspec {

// Equivalence of pencils: orthogonal (A, C) with A j(z) A^-1 = j'(C z),
// C preserving the lattice. Invariants certify inequivalence; a verified
// (A, C) certifies equivalence; everything else is reported as undecided.

inline constexpr std::uint64_t kDefaultSeed = 42;

/// dim { X in gl(m) : X J_i = J_i X for all i }.
inline std::size_t commutant_dimension(const SkewPencil& p, double tol = kDefaultTolerances.spectral) {
  const std::size_t m = p.m(), mm = m * m;
  // Row (i, r, c) of X -> X J_i - J_i X, X flattened row-major.
  Matrix op(p.k() * mm, mm);
  for (std::size_t i = 0; i < p.k(); ++i) {
    const Matrix& J = p[i];
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < m; ++c) {
        const std::size_t row = i * mm + r * m + c;
        for (std::size_t l = 0; l < m; ++l) {
          op(row, r * m + l) += J(l, c);
          op(row, l * m + c) -= J(r, l);
        }
      }
  }
  return nullspace(op, tol).basis.size();
}

/// All words w = (i_1, ..., i_len) over {0..k-1} for len = 1..maxlen,
/// shortest first, lexicographic within a length.
inline std::vector<std::vector<std::size_t>> trace_words(std::size_t k, std::size_t maxlen) {
  std::vector<std::vector<std::size_t>> words;
  for (std::size_t len = 1; len <= maxlen; ++len) {
    std::vector<std::size_t> w(len, 0);
    for (;;) {
      words.push_back(w);
      std::size_t pos = len;
      while (pos > 0 && ++w[pos - 1] == k) w[--pos] = 0;
      if (pos == 0) break;
    }
  }
  return words;
}

inline std::string word_name(const std::vector<std::size_t>& w) {
  std::string s = "tr(";
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? " J" : "J") + std::to_string(w[i] + 1);
  return s + ")";
}

/// Traces of every word in J_1..J_k up to length `maxlen`, in `trace_words` order.
inline Vector word_trace_invariants(const SkewPencil& p, std::size_t maxlen) {
  if (maxlen > 6) throw DomainError("word_trace_invariants: maxlen must be <= 6");
  Vector out;
  for (const auto& w : trace_words(p.k(), maxlen)) {
    Matrix prod = p[w[0]];
    for (std::size_t i = 1; i < w.size(); ++i) prod = prod * p[w[i]];
    out.push_back(prod.trace());
  }
  return out;
}

/// Ascending eigenvalues of the Ricci v-block, (1/2) sum J_i^2.
inline Vector ric_spectrum_invariant(const SkewPencil& p) {
  return sym_eigen(ricci_form(p).v_block()).values;
}

/// Re-expresses pA through z -> C^-1 z: J~_i = sum_l C_il J_l.
inline SkewPencil twist(const SkewPencil& p, const Matrix& C) {
  if (C.rows() != p.k() || C.cols() != p.k()) throw ShapeError("twist: C must be k x k");
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < p.k(); ++i) {
    Matrix Ji(p.m(), p.m());
    for (std::size_t l = 0; l < p.k(); ++l) Ji += C(i, l) * p[l];
    out.push_back(std::move(Ji));
  }
  return SkewPencil(std::move(out));
}

inline Matrix random_orthogonal(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = g(rng);
  return polar_factor(m);
}

struct ConjugacyOptions {
  std::size_t restarts = 32;
  std::size_t max_iterations = 500;
  double gradient_tol = 1e-12;
  /// A restart reaching this normalized residual ends the search.
  double target_residual = 1e-24;
};

struct ConjugacyResult {
  double residual = std::numeric_limits<double>::infinity();  ///< f(A) / sum |J_i|_F^2
  Matrix A;
  std::size_t restarts_used = 0;
};

namespace detail {

inline double conjugacy_objective(const SkewPencil& pa, const SkewPencil& pb, const Matrix& A) {
  double f = 0.0;
  for (std::size_t i = 0; i < pa.k(); ++i) {
    const double r = frobenius_norm(A * pa[i] - pb[i] * A);
    f += r * r;
  }
  return f;
}

// Levenberg-Marquardt on O(m): steps A -> polar(A (I + Omega)) with Omega
// skew, Omega solving the damped Gauss-Newton system for the residuals
// A J~_i - J'_i A.
inline std::pair<Matrix, double> refine_conjugator(const SkewPencil& pa, const SkewPencil& pb,
                                                   Matrix A, const ConjugacyOptions& opt,
                                                   double norm_scale) {
  const std::size_t m = pa.m(), k = pa.k(), d = m * (m - 1) / 2;
  double f = conjugacy_objective(pa, pb, A);
  double mu = 1e-3;
  if (d == 0) return {A, f};
  const std::size_t nres = k * m * m;
  for (std::size_t it = 0; it < opt.max_iterations; ++it) {
    if (f <= opt.target_residual * norm_scale) break;
    Matrix jac(nres, d);
    Vector res(nres);
    for (std::size_t i = 0; i < k; ++i) {
      const Matrix r = A * pa[i] - pb[i] * A;
      std::copy(r.entries().begin(), r.entries().end(), res.begin() + static_cast<std::ptrdiff_t>(i * m * m));
    }
    std::size_t col = 0;
    for (std::size_t p = 0; p < m; ++p)
      for (std::size_t q = p + 1; q < m; ++q, ++col) {
        // A E_pq has column q equal to A e_p and column p equal to -A e_q.
        Matrix ae(m, m);
        for (std::size_t r = 0; r < m; ++r) {
          ae(r, q) = A(r, p);
          ae(r, p) = -A(r, q);
        }
        for (std::size_t i = 0; i < k; ++i) {
          const Matrix dr = ae * pa[i] - pb[i] * ae;
          for (std::size_t e = 0; e < m * m; ++e) jac(i * m * m + e, col) = dr.entries()[e];
        }
      }
    const Matrix jt = jac.transpose();
    const Matrix h = jt * jac;
    Vector grad = jt * res;
    if (norm(grad) <= opt.gradient_tol * norm_scale) break;

    bool accepted = false;
    while (!accepted && mu < 1e16) {
      Matrix damped = h;
      for (std::size_t i = 0; i < d; ++i) damped(i, i) += mu * std::max(h(i, i), 1e-12);
      Vector step;
      try {
        step = solve_spd(damped, grad);
      } catch (const NumericalError&) {
        mu *= 10.0;
        continue;
      }
      Matrix omega = Matrix::identity(m);
      std::size_t c = 0;
      for (std::size_t p = 0; p < m; ++p)
        for (std::size_t q = p + 1; q < m; ++q, ++c) {
          omega(p, q) -= step[c];
          omega(q, p) += step[c];
        }
      const Matrix candidate = polar_factor(A * omega);
      const double fc = conjugacy_objective(pa, pb, candidate);
      if (fc < f) {
        A = candidate;
        f = fc;
        mu = std::max(mu / 3.0, 1e-12);
        accepted = true;
      } else {
        mu *= 4.0;
      }
    }
    if (!accepted) break;
  }
  return {A, f};
}

}  // namespace detail

/// Searches for orthogonal A with A J~_i A^T = J'_i, where J~ is pA twisted
/// by C. Restart 0 starts from the identity, the rest from seeded random
/// orthogonal matrices. Returns the best normalized residual found.
inline ConjugacyResult conjugacy_search(const SkewPencil& pa, const SkewPencil& pb, const Matrix& C,
                                        std::uint64_t seed = kDefaultSeed,
                                        const ConjugacyOptions& opt = {}) {
  require_same_shape(pa, pb, "conjugacy_search");
  require_orthogonal(C, "conjugacy_search");
  const SkewPencil tw = twist(pa, C);
  double norm_scale = 0.0;
  for (const auto& J : tw.generators()) norm_scale += std::pow(frobenius_norm(J), 2);
  const double normalizer = norm_scale > 0.0 ? norm_scale : 1.0;

  std::mt19937_64 rng(seed);
  ConjugacyResult best;
  best.A = Matrix::identity(pa.m());
  for (std::size_t r = 0; r < opt.restarts; ++r) {
    const Matrix start = r == 0 ? Matrix::identity(pa.m()) : random_orthogonal(pa.m(), rng);
    auto [A, f] = detail::refine_conjugator(tw, pb, start, opt, normalizer);
    ++best.restarts_used;
    if (f / normalizer < best.residual) {
      best.residual = f / normalizer;
      best.A = std::move(A);
    }
    if (best.residual <= opt.target_residual) break;
  }
  return best;
}

/// max_i |A J~_i A^T - J'_i|_F for the certificate (A, C).
inline double certificate_defect(const SkewPencil& pa, const SkewPencil& pb, const Matrix& A,
                                 const Matrix& C) {
  const SkewPencil tw = twist(pa, C);
  double d = 0.0;
  for (std::size_t i = 0; i < pa.k(); ++i)
    d = std::max(d, frobenius_norm(A * tw[i] * A.transpose() - pb[i]));
  return d;
}

enum class EquivalenceState { Equivalent, Inequivalent, Undecided };

inline const char* to_string(EquivalenceState s) {
  switch (s) {
    case EquivalenceState::Equivalent:
      return "Equivalent";
    case EquivalenceState::Inequivalent:
      return "Inequivalent";
    default:
      return "Undecided";
  }
}

struct EquivalenceCertificate {
  Matrix A;  ///< orthogonal m x m
  Matrix C;  ///< orthogonal k x k, C(L) = L
  double defect = 0.0;
};

struct InvariantWitness {
  std::string name;
  Vector value_a;
  Vector value_b;
  double gap = 0.0;  ///< relative
};

struct EquivalenceVerdict {
  EquivalenceState state = EquivalenceState::Undecided;
  std::optional<EquivalenceCertificate> certificate;
  std::optional<InvariantWitness> witness;
  std::size_t candidates = 0;  ///< lattice automorphisms tried
  std::size_t excluded = 0;    ///< ... ruled out by invariants
  std::size_t restarts_used = 0;
  double best_residual = std::numeric_limits<double>::infinity();
};

struct EquivalenceOptions {
  double tol = kDefaultTolerances.comparison;
  std::size_t word_length = 4;
  double search_residual = 1e-8;   ///< normalized f(A) accepted from the search
  double certificate_tol = 1e-7;   ///< relative to max(1, max_i |J'_i|_F)
  ConjugacyOptions search{};
};

namespace detail {
inline std::optional<InvariantWitness> compare_invariant(const std::string& name, const Vector& a,
                                                         const Vector& b, double threshold) {
  double gap = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    gap = std::max(gap, std::abs(a[i] - b[i]) / scale_of(std::max(std::abs(a[i]), std::abs(b[i]))));
  if (gap <= threshold) return std::nullopt;
  return InvariantWitness{name, a, b, gap};
}
}  // namespace detail

/// Decides L-equivalence of two pencils as far as invariants and a seeded
/// conjugacy search allow. Lattice automorphisms are tried in enumeration
/// order (identity first); for each, the Ricci spectrum and the word traces
/// of the twisted pA are compared with those of pB, and surviving candidates
/// go to `conjugacy_search`.
inline EquivalenceVerdict l_equivalence(const SkewPencil& pa, const SkewPencil& pb, const LatticeBasis& L,
                                        std::uint64_t seed = kDefaultSeed, const EquivalenceOptions& opt = {}) {
  require_same_shape(pa, pb, "l_equivalence");
  if (L.k() != pa.k()) throw ShapeError("l_equivalence: lattice rank differs from k");
  const double screen = 10.0 * opt.tol;
  double cert_scale = 1.0;
  for (const auto& J : pb.generators()) cert_scale = std::max(cert_scale, frobenius_norm(J));

  const Vector ric_b = ric_spectrum_invariant(pb);
  const Vector words_b = word_trace_invariants(pb, opt.word_length);
  const auto words = trace_words(pa.k(), opt.word_length);

  EquivalenceVerdict v;
  std::optional<InvariantWitness> first_witness;
  for (const Matrix& C : lattice_automorphisms(L)) {
    ++v.candidates;
    const SkewPencil tw = twist(pa, C);
    auto witness = detail::compare_invariant("ric_spectrum", ric_spectrum_invariant(tw), ric_b, screen);
    if (!witness) {
      const Vector words_a = word_trace_invariants(tw, opt.word_length);
      for (std::size_t i = 0; i < words.size() && !witness; ++i)
        witness = detail::compare_invariant(word_name(words[i]), {words_a[i]}, {words_b[i]}, screen);
    }
    if (witness) {
      ++v.excluded;
      if (!first_witness) first_witness = std::move(witness);
      continue;
    }
    const ConjugacyResult r = conjugacy_search(pa, pb, C, seed, opt.search);
    v.restarts_used += r.restarts_used;
    v.best_residual = std::min(v.best_residual, r.residual);
    if (r.residual > opt.search_residual) continue;
    const double defect = certificate_defect(pa, pb, r.A, C);
    if (defect > opt.certificate_tol * cert_scale) continue;
    v.state = EquivalenceState::Equivalent;
    v.certificate = EquivalenceCertificate{r.A, C, defect};
    return v;
  }
  if (v.excluded == v.candidates) {
    v.state = EquivalenceState::Inequivalent;
    v.witness = std::move(first_witness);
  }
  return v;
}

}  // namespace nilspec
