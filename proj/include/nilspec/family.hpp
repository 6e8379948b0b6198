#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "nilspec/error.hpp"
#include "nilspec/matrix.hpp"
#include "nilspec/nilalg.hpp"

namespace nilspec {

/// Parameters of the six-dimensional family j_{a,b}(s,t) = s a + t b.
///
/// `a` sets the 2x2 rotation blocks of a (strictly increasing, positive);
/// `b` holds the couplings (b12, b13, b23) between e1, e3 and e5.
struct FamilyParams {
  std::array<double, 3> a{1.0, 2.0, 3.0};
  std::array<double, 3> b{0.0, 1.0, 0.0};

  void validate() const {
    if (!(0.0 < a[0] && a[0] < a[1] && a[1] < a[2]))
      throw DomainError("family parameters require 0 < a1 < a2 < a3");
  }
};

/// a = (1,2,3), b = (0,1,0): the instance whose Ricci matrix is known in closed form.
inline FamilyParams reference_family() { return {}; }

/// Block-diagonal skew matrix with blocks [[0, -a_i], [a_i, 0]].
inline Matrix build_a(const std::array<double, 3>& a) {
  FamilyParams{a, {}}.validate();
  Matrix out(6, 6);
  for (std::size_t i = 0; i < 3; ++i) {
    out(2 * i + 1, 2 * i) = a[i];
    out(2 * i, 2 * i + 1) = -a[i];
  }
  return out;
}

/// Skew matrix coupling e1, e3, e5: b12 at (1,3), b13 at (1,5), b23 at (3,5)
/// (one-based), with rows and columns 2, 4, 6 zero.
inline Matrix build_b(const std::array<double, 3>& b) {
  Matrix out(6, 6);
  const auto put = [&](std::size_t r, std::size_t c, double v) {
    out(r, c) = v;
    out(c, r) = -v;
  };
  put(0, 2, b[0]);
  put(0, 4, b[1]);
  put(2, 4, b[2]);
  return out;
}

inline SkewPencil family_pencil(const FamilyParams& p) {
  return SkewPencil({build_a(p.a), build_b(p.b)});
}

/// Closed interval of admissible deformation parameters; always contains 0.
struct DeformationInterval {
  double lo = 0.0;
  double hi = 0.0;

  bool has_interior() const { return lo < hi; }
  bool contains(double u, double slack = 0.0) const { return lo - slack <= u && u <= hi + slack; }
};

namespace detail {
// Rates at which b12^2, b13^2, b23^2 move with u.
inline std::array<double, 3> deformation_rates(const std::array<double, 3>& a) {
  const double a1 = a[0] * a[0], a2 = a[1] * a[1], a3 = a[2] * a[2];
  return {a2 - a1, a1 - a3, a3 - a2};
}
}  // namespace detail

inline DeformationInterval interval_I(const FamilyParams& p) {
  p.validate();
  const auto rate = detail::deformation_rates(p.a);
  const double b12 = p.b[0] * p.b[0], b13 = p.b[1] * p.b[1], b23 = p.b[2] * p.b[2];
  // A zero-valued bound must compare as +0 so that I = [0, 0] prints cleanly.
  return {std::max(-b12 / rate[0], -b23 / rate[2]) + 0.0, b13 / -rate[1] + 0.0};
}

/// b(u): the solution of the squared deformation equations keeping the sign
/// of each b_ij (a zero entry counts as positive).
inline FamilyParams deform(const FamilyParams& p, double u) {
  const DeformationInterval I = interval_I(p);
  if (!I.contains(u))
    throw DomainError("deform: u = " + std::to_string(u) + " lies outside I = [" +
                      std::to_string(I.lo) + ", " + std::to_string(I.hi) + "]");
  const auto rate = detail::deformation_rates(p.a);
  FamilyParams out = p;
  for (std::size_t i = 0; i < 3; ++i) {
    // Clamp only the rounding residue at the interval endpoints.
    const double sq = std::max(0.0, p.b[i] * p.b[i] + u * rate[i]);
    out.b[i] = std::copysign(std::sqrt(sq), p.b[i] < 0.0 ? -1.0 : 1.0);
  }
  return out;
}

/// Ricci v-block (1/2)(a^2 + b(u)^2), written out entry by entry.
inline Matrix ricci_u(const FamilyParams& p, double u) {
  const FamilyParams d = deform(p, u);
  const auto [a1, a2, a3] = d.a;
  const auto [b12, b13, b23] = d.b;
  Matrix r(6, 6);
  r(0, 0) = -0.5 * (a1 * a1 + b12 * b12 + b13 * b13);
  r(1, 1) = -0.5 * a1 * a1;
  r(2, 2) = -0.5 * (a2 * a2 + b12 * b12 + b23 * b23);
  r(3, 3) = -0.5 * a2 * a2;
  r(4, 4) = -0.5 * (a3 * a3 + b13 * b13 + b23 * b23);
  r(5, 5) = -0.5 * a3 * a3;
  r(0, 2) = r(2, 0) = -0.5 * b13 * b23;
  r(0, 4) = r(4, 0) = 0.5 * b12 * b23;
  r(2, 4) = r(4, 2) = -0.5 * b12 * b13;
  return r;
}

/// `count` equally spaced points of I including both endpoints.
inline std::vector<double> u_grid(const DeformationInterval& I, std::size_t count) {
  if (count == 0) throw DomainError("u_grid: need at least one sample");
  std::vector<double> us(count, I.lo);
  if (count == 1) return us;
  for (std::size_t i = 0; i < count; ++i)
    us[i] = I.lo + (I.hi - I.lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  us.back() = I.hi;
  return us;
}

/// Lower bound m(m-1)/2 - [m/2]([m/2]+2) on the dimension of isospectral,
/// inequivalent families for dim z = 2. May be zero or negative for small m.
inline long long dimension_bound(long long m) {
  if (m < 1) throw DomainError("dimension_bound: m must be positive");
  const long long h = m / 2;
  return m * (m - 1) / 2 - h * (h + 2);
}

}  // namespace nilspec
