#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nilspec/charpoly.hpp"
#include "nilspec/error.hpp"
#include "nilspec/family.hpp"
#include "nilspec/nilalg.hpp"

namespace nilspec {

enum class IsospecVerdict { Isospectral, NotIsospectral };
enum class IsospecMode { Sampled, Exact };

inline const char* to_string(IsospecVerdict v) {
  return v == IsospecVerdict::Isospectral ? "Isospectral" : "NotIsospectral";
}
inline const char* to_string(IsospecMode m) { return m == IsospecMode::Sampled ? "sampled" : "exact"; }

struct IsospecReport {
  IsospecVerdict verdict = IsospecVerdict::Isospectral;
  double max_residual = 0.0;
  std::optional<Vector> witness_z;  ///< set iff NotIsospectral
  IsospecMode mode = IsospecMode::Sampled;
  std::size_t samples = 0;
};

using RationalPencil = BasicSkewPencil<Rational>;

/// Largest coefficientwise gap between char_poly(j(z)) and char_poly(j'(z)),
/// each gap measured relative to max(1, |c|, |c'|).
inline double spectra_equal_at(const SkewPencil& pa, const SkewPencil& pb, std::span<const double> z) {
  require_same_shape(pa, pb, "spectra_equal_at");
  const auto ca = char_poly(pencil_eval(pa, z));
  const auto cb = char_poly(pencil_eval(pb, z));
  double r = 0.0;
  for (std::size_t i = 0; i < ca.coeffs.size(); ++i) {
    const double gap = std::abs(ca.coeffs[i] - cb.coeffs[i]);
    r = std::max(r, gap / std::max({1.0, std::abs(ca.coeffs[i]), std::abs(cb.coeffs[i])}));
  }
  return r;
}

/// The deterministic evaluation points used to certify j ~ j'.
///
/// Every coefficient of char_poly(j(z)) is a homogeneous polynomial of degree
/// <= m in z, so agreement on these points forces agreement everywhere:
///  - k = 1: z = (1);
///  - k = 2: 2m+1 directions (cos t, sin t), t equally spaced in [0, pi)
///    (a homogeneous polynomial restricted to the circle is a trigonometric
///    polynomial of degree <= m with parity, pinned by 2m+1 half-circle samples);
///  - k = 3: 2m+1 directions on the full circle times m+1 heights
///    z_3 in {0, ..., m}.
/// For k >= 4 there is no certified grid; `samples` pseudo-random directions
/// (fixed seed) are used instead. `samples` may raise, never lower, the
/// circle count for k <= 3.
inline std::vector<Vector> isospec_sample_points(std::size_t m, std::size_t k, std::size_t samples = 0) {
  const std::size_t circle = 2 * m + 1;
  if (k <= 3 && samples != 0 && samples < circle)
    throw DomainError("isospec: sample count " + std::to_string(samples) + " is below 2m+1 = " +
                      std::to_string(circle));
  const std::size_t n = std::max(circle, samples);
  std::vector<Vector> pts;
  switch (k) {
    case 1:
      pts.push_back({1.0});
      break;
    case 2:
      for (std::size_t j = 0; j < n; ++j) {
        const double t = std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
        pts.push_back({std::cos(t), std::sin(t)});
      }
      break;
    case 3:
      for (std::size_t h = 0; h <= m; ++h)
        for (std::size_t j = 0; j < n; ++j) {
          const double t = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
          pts.push_back({std::cos(t), std::sin(t), static_cast<double>(h)});
        }
      break;
    default: {
      if (samples == 0)
        throw DomainError("isospec: k >= 4 requires an explicit sample count");
      std::mt19937_64 rng(0x5eed);
      std::normal_distribution<double> g;
      for (std::size_t j = 0; j < samples; ++j) {
        Vector z(k);
        for (double& c : z) c = g(rng);
        const double nz = norm(z);
        for (double& c : z) c /= nz;
        pts.push_back(std::move(z));
      }
    }
  }
  return pts;
}

/// Sampled test of j ~ j' (equal spectra of j(z), j'(z) for every z).
inline IsospecReport pencil_isospectral(const SkewPencil& pa, const SkewPencil& pb,
                                        double tol = kDefaultTolerances.comparison,
                                        std::size_t samples = 0) {
  require_same_shape(pa, pb, "pencil_isospectral");
  IsospecReport rep;
  const auto pts = isospec_sample_points(pa.m(), pa.k(), samples);
  rep.samples = pts.size();
  double worst = -1.0;
  for (const auto& z : pts) {
    const double r = spectra_equal_at(pa, pb, z);
    if (r > worst) {
      worst = r;
      if (r > tol) rep.witness_z = z;
    }
  }
  rep.max_residual = std::max(worst, 0.0);
  rep.verdict = rep.max_residual <= tol ? IsospecVerdict::Isospectral : IsospecVerdict::NotIsospectral;
  if (rep.verdict == IsospecVerdict::Isospectral) rep.witness_z.reset();
  return rep;
}

/// Exact test for rational pencils: Faddeev-LeVerrier over the integer grid
/// {0..m}^k, which determines every homogeneous polynomial of degree <= m.
inline IsospecReport pencil_isospectral_exact(const RationalPencil& pa, const RationalPencil& pb) {
  if (pa.m() != pb.m() || pa.k() != pb.k())
    throw ShapeError("pencil_isospectral_exact: pencils have different (m, k)");
  const std::size_t m = pa.m(), k = pa.k();
  IsospecReport rep;
  rep.mode = IsospecMode::Exact;
  std::vector<long long> idx(k, 0);
  for (;;) {
    std::vector<Rational> z(k);
    for (std::size_t i = 0; i < k; ++i) z[i] = idx[i];
    ++rep.samples;
    const auto ca = char_poly(pencil_eval(pa, z));
    const auto cb = char_poly(pencil_eval(pb, z));
    for (std::size_t i = 0; i < ca.coeffs.size(); ++i) {
      if (ca.coeffs[i] == cb.coeffs[i]) continue;
      const double gap = to_double(Rational(abs(ca.coeffs[i] - cb.coeffs[i])));
      const double sc =
          std::max({1.0, std::abs(to_double(ca.coeffs[i])), std::abs(to_double(cb.coeffs[i]))});
      rep.max_residual = std::max(rep.max_residual, gap / sc);
      if (!rep.witness_z) {
        Vector w(k);
        for (std::size_t j = 0; j < k; ++j) w[j] = static_cast<double>(idx[j]);
        rep.witness_z = std::move(w);
      }
    }
    std::size_t pos = 0;
    while (pos < k && ++idx[pos] > static_cast<long long>(m)) idx[pos++] = 0;
    if (pos == k) break;
  }
  rep.verdict = rep.witness_z ? IsospecVerdict::NotIsospectral : IsospecVerdict::Isospectral;
  return rep;
}

/// Closed-form isospectrality test for two members of the six-dimensional
/// family sharing the same a: returns the u in I(A) that carries the squared
/// couplings of A to those of B, or nothing if the three equations disagree.
inline std::optional<double> isospectral_parameter(const FamilyParams& A, const FamilyParams& B,
                                           double tol = 1e-8) {
  A.validate();
  B.validate();
  for (std::size_t i = 0; i < 3; ++i)
    if (std::abs(A.a[i] - B.a[i]) > tol * scale_of(std::abs(A.a[i])))
      throw DomainError("isospectral_parameter: parameter records must share the same a");
  const auto rate = detail::deformation_rates(A.a);
  std::array<double, 3> u{};
  for (std::size_t i = 0; i < 3; ++i) u[i] = (B.b[i] * B.b[i] - A.b[i] * A.b[i]) / rate[i];
  const auto [lo, hi] = std::minmax({u[0], u[1], u[2]});
  if (hi - lo > tol) return std::nullopt;
  const double mid = 0.5 * (lo + hi);
  if (!interval_I(A).contains(mid, tol)) return std::nullopt;
  return mid;
}

}  // namespace nilspec
