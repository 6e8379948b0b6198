#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "nilspec/error.hpp"
#include "nilspec/lattice.hpp"
#include "nilspec/linalg.hpp"
#include "nilspec/nilalg.hpp"

namespace nilspec {

// Geometry of N(j) = { (x, zbar) : |x| = 1 } inside the nilmanifold G(j)/L.
// Tangent data is expressed in the left-invariant orthonormal frame
// e_1..e_m, z_1..z_k, so nothing below depends on zbar.

inline constexpr double kUnitTol = 1e-12;
inline constexpr double kOrthoPairTol = 1e-10;

struct BoundaryPoint {
  Vector x;     ///< unit vector in v
  Vector zbar;  ///< representative in the fundamental parallelepiped of L

  static BoundaryPoint make(const LatticeBasis& L, Vector x, std::span<const double> z) {
    if (std::abs(norm(x) - 1.0) > kUnitTol) throw DomainError("BoundaryPoint: x is not a unit vector");
    return {std::move(x), L.reduce(z)};
  }
};

inline void require_unit(std::span<const double> x, const char* what) {
  if (std::abs(norm(x) - 1.0) > kUnitTol)
    throw DomainError(std::string(what) + ": x is not a unit vector");
}

inline void require_orthonormal_pair(std::span<const double> x, std::span<const double> y,
                                     const char* what) {
  if (std::abs(norm(x) - 1.0) > kOrthoPairTol || std::abs(norm(y) - 1.0) > kOrthoPairTol ||
      std::abs(dot(x, y)) > kOrthoPairTol)
    throw DomainError(std::string(what) + ": (x, y) is not an orthonormal pair");
}

struct BoundaryFrame {
  Vector normal;                ///< (x, 0)
  std::vector<Vector> tangent;  ///< m+k-1 orthonormal vectors spanning x^perp
};

/// Outward normal (x, 0) and an orthonormal basis of its complement: the
/// complement of x in v (Gram-Schmidt on the coordinate vectors, skipping the
/// one most aligned with x) followed by z_1..z_k.
inline BoundaryFrame boundary_frame(const SkewPencil& p, std::span<const double> x) {
  const std::size_t m = p.m(), n = p.dim();
  require_length(x, m, "boundary_frame");
  require_unit(x, "boundary_frame");
  BoundaryFrame f;
  f.normal.assign(n, 0.0);
  std::copy(x.begin(), x.end(), f.normal.begin());

  std::size_t skip = 0;
  for (std::size_t i = 1; i < m; ++i)
    if (std::abs(x[i]) > std::abs(x[skip])) skip = i;

  std::vector<Vector> in_v{Vector(x.begin(), x.end())};
  for (std::size_t i = 0; i < m; ++i) {
    if (i == skip) continue;
    Vector w = unit_vector(m, i);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : in_v) w = w - dot(w, q) * q;
    w = (1.0 / norm(w)) * w;
    in_v.push_back(w);
  }
  for (std::size_t i = 1; i < in_v.size(); ++i) {
    Vector t(n, 0.0);
    std::copy(in_v[i].begin(), in_v[i].end(), t.begin());
    f.tangent.push_back(std::move(t));
  }
  for (std::size_t i = 0; i < p.k(); ++i) f.tangent.push_back(unit_vector(n, m + i));
  return f;
}

inline BoundaryFrame boundary_frame(const SkewPencil& p, const BoundaryPoint& pt) {
  return boundary_frame(p, pt.x);
}

/// Ric(x, x) for x in v, from the v-block of the Ricci form.
inline double ricci_xx(const SkewPencil& p, std::span<const double> x) {
  return bilinear(ricci_form(p).v_block(), x, x);
}

/// scal(x, zbar) = scal~ + (m-1)(m-2) - Ric~(x, x).
inline double scal_at(const SkewPencil& p, std::span<const double> x) {
  require_length(x, p.m(), "scal_at");
  require_unit(x, "scal_at");
  const double m = static_cast<double>(p.m());
  return scal_ambient(p) + (m - 1.0) * (m - 2.0) - ricci_xx(p, x);
}

inline double scal_at(const SkewPencil& p, const BoundaryPoint& pt) { return scal_at(p, pt.x); }

struct ScalReport {
  double scal_closed_form = 0.0;   ///< closed form scal~ + (m-1)(m-2) - Ric~(x,x)
  double scal_shape = 0.0;   ///< Gauss equation with the shape operator
  double ambient = 0.0;      ///< scal~
  double ric_xx = 0.0;       ///< Ric~(x, x)
  double trace_nabla_x = 0.0;  ///< trace of u -> nabla_u x on g(j); vanishes
  double shape_trace = 0.0;    ///< trace of the shape operator; equals m-1
  double nabla_x_norm2 = 0.0;  ///< |nabla x|^2; equals -Ric~(x, x)
};

/// The matrix of u -> nabla_u x on g(j), for x in v viewed as a
/// left-invariant field: y -> [y, x]/2 on v, w -> -j(w)x/2 on z.
inline Matrix nabla_of_v_field(const SkewPencil& p, std::span<const double> x) {
  const std::size_t m = p.m(), n = p.dim();
  require_length(x, m, "nabla_of_v_field");
  Matrix out(n, n);
  for (std::size_t b = 0; b < m; ++b) {
    const Vector br = bracket(p, unit_vector(m, b), x);
    for (std::size_t i = 0; i < p.k(); ++i) out(m + i, b) = 0.5 * br[i];
  }
  for (std::size_t i = 0; i < p.k(); ++i) {
    const Vector jx = p[i] * x;
    for (std::size_t c = 0; c < m; ++c) out(c, m + i) = -0.5 * jx[c];
  }
  return out;
}

/// Scalar curvature of N(j) from the Gauss equation
///   scal = scal~ - 2 Ric~(nu, nu) + (tr S)^2 - |S|^2,
/// with S u = proj_v u + nabla_u x on the tangent space x^perp.
inline ScalReport scal_via_shape(const SkewPencil& p, std::span<const double> x) {
  const std::size_t m = p.m();
  const BoundaryFrame frame = boundary_frame(p, x);
  const Matrix nx = nabla_of_v_field(p, x);

  Matrix op = nx;
  for (std::size_t i = 0; i < m; ++i) op(i, i) += 1.0;  // proj_v

  const std::size_t t = frame.tangent.size();
  Matrix shape(t, t);
  for (std::size_t c = 0; c < t; ++c) {
    const Vector image = op * frame.tangent[c];
    for (std::size_t r = 0; r < t; ++r) shape(r, c) = dot(frame.tangent[r], image);
  }

  const RicciForm ric = ricci_form(p);
  ScalReport rep;
  rep.ambient = scal_ambient(p);
  rep.ric_xx = bilinear(ric.form, frame.normal, frame.normal);
  rep.trace_nabla_x = nx.trace();
  rep.shape_trace = shape.trace();
  const double fn = frobenius_norm(nx);
  rep.nabla_x_norm2 = fn * fn;
  const double sn = frobenius_norm(shape);
  rep.scal_shape = rep.ambient - 2.0 * rep.ric_xx + rep.shape_trace * rep.shape_trace - sn * sn;
  const double md = static_cast<double>(m);
  rep.scal_closed_form = rep.ambient + (md - 1.0) * (md - 2.0) - rep.ric_xx;
  return rep;
}

inline ScalReport scal_via_shape(const SkewPencil& p, const BoundaryPoint& pt) {
  return scal_via_shape(p, pt.x);
}

struct ScalExtremes {
  double min = 0.0;
  double max = 0.0;
  Vector argmin_x;
  Vector argmax_x;
};

/// Flips `v` so that its first non-negligible component is positive.
inline Vector canonical_sign(Vector v) {
  for (double c : v) {
    if (std::abs(c) <= 1e-12) continue;
    if (c < 0.0)
      for (double& e : v) e = -e;
    break;
  }
  return v;
}

/// Extremes of scal over N(j): the maximum sits on the eigenvector of the
/// smallest Ricci eigenvalue on v, the minimum on the largest.
inline ScalExtremes scal_extremes(const SkewPencil& p) {
  const SymEigen e = sym_eigen(ricci_form(p).v_block());
  const double m = static_cast<double>(p.m());
  const double base = scal_ambient(p) + (m - 1.0) * (m - 2.0);
  ScalExtremes out;
  out.max = base - e.values.front();
  out.min = base - e.values.back();
  out.argmax_x = canonical_sign(e.vectors.col(0));
  out.argmin_x = canonical_sign(e.vectors.col(p.m() - 1));
  return out;
}

/// Horizontal lift of the great circle through x in direction y:
/// sigma(t) = (cos t x + sin t y, z0 + t [x, y] / 2), unreduced.
inline GroupPoint horizontal_lift(const SkewPencil& p, std::span<const double> x,
                                  std::span<const double> y, std::span<const double> z0, double t) {
  require_length(x, p.m(), "horizontal_lift");
  require_length(y, p.m(), "horizontal_lift");
  require_length(z0, p.k(), "horizontal_lift");
  require_orthonormal_pair(x, y, "horizontal_lift");
  GroupPoint g;
  g.x.resize(p.m());
  for (std::size_t i = 0; i < p.m(); ++i) g.x[i] = std::cos(t) * x[i] + std::sin(t) * y[i];
  const Vector br = bracket(p, x, y);
  g.z.resize(p.k());
  for (std::size_t i = 0; i < p.k(); ++i) g.z[i] = z0[i] + 0.5 * t * br[i];
  return g;
}

/// Same curve, as a point of N(j) with the fiber coordinate reduced modulo L.
inline BoundaryPoint horizontal_lift(const SkewPencil& p, const LatticeBasis& L,
                                     std::span<const double> x, std::span<const double> y,
                                     std::span<const double> z0, double t) {
  if (L.k() != p.k()) throw ShapeError("horizontal_lift: lattice rank differs from k");
  GroupPoint g = horizontal_lift(p, x, y, z0, t);
  return {std::move(g.x), L.reduce(g.z)};
}

/// Fiber displacement after one full turn, pi [x, y]; zero iff x and y commute.
inline Vector holonomy_displacement(const SkewPencil& p, std::span<const double> x,
                                    std::span<const double> y) {
  require_orthonormal_pair(x, y, "holonomy_displacement");
  return std::numbers::pi * bracket(p, x, y);
}

struct FiberReport {
  double fiber_violation = 0.0;       ///< max |<nabla_w w', e_c>| over z-pairs
  double submersion_violation = 0.0;  ///< failure of d(pi) to be (Id_v, 0)
  double max_violation = 0.0;
};

/// Checks that the torus fibers are totally geodesic and flat and that the
/// projection (x, z) -> x is a Riemannian submersion, using the Koszul table.
inline FiberReport fiber_geometry_check(const SkewPencil& p) {
  const std::size_t m = p.m(), n = p.dim();
  const ConnectionTable g = connection_koszul(p);
  FiberReport rep;
  for (std::size_t i = m; i < n; ++i)
    for (std::size_t j = m; j < n; ++j)
      for (std::size_t c = 0; c < n; ++c)
        rep.fiber_violation = std::max(rep.fiber_violation, std::abs(g(i, j, c)));

  // Left translation by p = (x, z) acts on tangent vectors (xi, zeta) as
  // (xi, zeta + [x, xi]/2); composing with d(pi) must give xi on v and 0 on z
  // at every base point. Probe with the coordinate points x = e_i.
  for (std::size_t base = 0; base < m; ++base) {
    const Vector px = unit_vector(m, base);
    Matrix dl = Matrix::identity(n);
    for (std::size_t b = 0; b < m; ++b) {
      const Vector br = bracket(p, px, unit_vector(m, b));
      for (std::size_t i = 0; i < p.k(); ++i) dl(m + i, b) += 0.5 * br[i];
    }
    const Matrix dpi = block(dl, 0, 0, m, n);
    Matrix expected(m, n);
    set_block(expected, 0, 0, Matrix::identity(m));
    rep.submersion_violation = std::max(rep.submersion_violation, max_abs(dpi - expected));
  }
  rep.max_violation = std::max(rep.fiber_violation, rep.submersion_violation);
  return rep;
}

}  // namespace nilspec
