#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "nilspec/error.hpp"
#include "nilspec/linalg.hpp"
#include "nilspec/matrix.hpp"

namespace nilspec {

/// A linear map j: z -> so(v), stored as the images J_i = j(z_i) of the
/// standard orthonormal basis of z = R^k. Each J_i is a skew m x m matrix.
///
/// The pencil defines the two-step nilpotent metric Lie algebra
/// g(j) = v (+) z with z central and <[x,y], z> = <j(z) x, y>.
/// Throughout, vectors of g(j) are written in the fixed orthonormal basis
/// e_1..e_m of v followed by z_1..z_k.
template <typename T>
class BasicSkewPencil {
 public:
  BasicSkewPencil() = default;

  explicit BasicSkewPencil(std::vector<BasicMatrix<T>> generators) : J_(std::move(generators)) {
    if (J_.empty()) throw ShapeError("pencil needs at least one generator (k >= 1)");
    m_ = J_.front().rows();
    if (m_ == 0) throw ShapeError("pencil generators must be at least 1x1");
    for (std::size_t i = 0; i < J_.size(); ++i) {
      const auto& Ji = J_[i];
      if (Ji.rows() != m_ || Ji.cols() != m_)
        throw ShapeError("pencil generator " + std::to_string(i) + " is not " +
                         std::to_string(m_) + "x" + std::to_string(m_));
      if (!generator_is_skew(Ji))
        throw ShapeError("pencil generator " + std::to_string(i) + " is not skew-symmetric");
    }
  }

  std::size_t m() const { return m_; }
  std::size_t k() const { return J_.size(); }
  std::size_t dim() const { return m_ + J_.size(); }
  const std::vector<BasicMatrix<T>>& generators() const { return J_; }
  const BasicMatrix<T>& operator[](std::size_t i) const { return J_[i]; }

 private:
  static bool generator_is_skew(const BasicMatrix<T>& Ji) {
    if constexpr (std::is_same_v<T, double>) {
      return is_skew(Ji);
    } else {
      for (std::size_t r = 0; r < Ji.rows(); ++r)
        for (std::size_t c = r; c < Ji.cols(); ++c)
          if (Ji(r, c) != -Ji(c, r)) return false;
      return true;
    }
  }

  std::size_t m_ = 0;
  std::vector<BasicMatrix<T>> J_;
};

using SkewPencil = BasicSkewPencil<double>;

inline void require_same_shape(const SkewPencil& a, const SkewPencil& b, const char* what) {
  if (a.m() != b.m() || a.k() != b.k())
    throw ShapeError(std::string(what) + ": pencils have different (m, k)");
}

/// j(z) = sum_i z_i J_i.
template <typename T>
BasicMatrix<T> pencil_eval(const BasicSkewPencil<T>& p, std::span<const T> z) {
  if (z.size() != p.k())
    throw ShapeError("pencil_eval: z has length " + std::to_string(z.size()) + ", expected " +
                     std::to_string(p.k()));
  BasicMatrix<T> out(p.m(), p.m());
  for (std::size_t i = 0; i < p.k(); ++i) {
    if (z[i] == T(0)) continue;
    out += p[i] * z[i];
  }
  return out;
}

template <typename T>
BasicMatrix<T> pencil_eval(const BasicSkewPencil<T>& p, const std::vector<T>& z) {
  return pencil_eval(p, std::span<const T>(z));
}

/// [x, y] in z: component i is <J_i x, y>.
inline Vector bracket(const SkewPencil& p, std::span<const double> x, std::span<const double> y) {
  require_length(x, p.m(), "bracket");
  require_length(y, p.m(), "bracket");
  Vector out(p.k(), 0.0);
  for (std::size_t i = 0; i < p.k(); ++i) out[i] = bilinear(p[i], y, x);
  return out;
}

/// The pencil with every generator conjugated: J_i -> A J_i A^T.
inline SkewPencil conjugate(const SkewPencil& p, const Matrix& a) {
  std::vector<Matrix> out;
  out.reserve(p.k());
  const Matrix at = a.transpose();
  for (const auto& Ji : p.generators()) {
    Matrix c = a * Ji * at;
    out.push_back(0.5 * (c - c.transpose()));
  }
  return SkewPencil(std::move(out));
}

inline SkewPencil scaled(const SkewPencil& p, double s) {
  std::vector<Matrix> out;
  for (const auto& Ji : p.generators()) out.push_back(s * Ji);
  return SkewPencil(std::move(out));
}

/// True iff no nonzero x in v is central, i.e. the J_i have no common kernel.
inline bool center_reduced(const SkewPencil& p, double tol = kDefaultTolerances.spectral) {
  const std::size_t m = p.m();
  Matrix stacked(p.k() * m, m);
  for (std::size_t i = 0; i < p.k(); ++i) set_block(stacked, i * m, 0, p[i]);
  if (frobenius_norm(stacked) == 0.0) return false;
  return nullspace(stacked, tol).basis.empty();
}

// ---------------------------------------------------------------------------
// Group G(j) in exponential coordinates.

struct GroupPoint {
  Vector x;  ///< v-component
  Vector z;  ///< z-component
};

inline void require_point(const SkewPencil& p, const GroupPoint& g, const char* what) {
  require_length(g.x, p.m(), what);
  require_length(g.z, p.k(), what);
}

/// (x, z) . (x', z') = (x + x', z + z' + [x, x'] / 2).
inline GroupPoint group_mul(const SkewPencil& p, const GroupPoint& g, const GroupPoint& h) {
  require_point(p, g, "group_mul");
  require_point(p, h, "group_mul");
  GroupPoint out{g.x + h.x, g.z + h.z};
  const Vector br = bracket(p, g.x, h.x);
  for (std::size_t i = 0; i < p.k(); ++i) out.z[i] += 0.5 * br[i];
  return out;
}

inline GroupPoint group_inverse(const GroupPoint& g) { return {-1.0 * g.x, -1.0 * g.z}; }

inline GroupPoint group_identity(const SkewPencil& p) {
  return {Vector(p.m(), 0.0), Vector(p.k(), 0.0)};
}

/// Matrix of Id - ad_v / 2 on g(j), which is the differential of exp at v
/// after left translation back to the identity.
inline Matrix exp_pushforward(const SkewPencil& p, std::span<const double> v) {
  const std::size_t m = p.m(), n = p.dim();
  require_length(v, n, "exp_pushforward");
  Matrix out = Matrix::identity(n);
  const std::span<const double> vx = v.subspan(0, m);
  for (std::size_t b = 0; b < m; ++b) {
    const Vector ad = bracket(p, vx, unit_vector(m, b));
    for (std::size_t i = 0; i < p.k(); ++i) out(m + i, b) -= 0.5 * ad[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Levi-Civita connection of the left-invariant metric.

/// gamma(a, b, c) = < nabla_{e_a} e_b, e_c > on the orthonormal basis of g(j).
class ConnectionTable {
 public:
  explicit ConnectionTable(std::size_t n) : n_(n), g_(n * n * n, 0.0) {}

  std::size_t dim() const { return n_; }
  double& operator()(std::size_t a, std::size_t b, std::size_t c) { return g_[(a * n_ + b) * n_ + c]; }
  double operator()(std::size_t a, std::size_t b, std::size_t c) const {
    return g_[(a * n_ + b) * n_ + c];
  }
  const std::vector<double>& data() const { return g_; }

  /// nabla_{e_a} e_b as a vector of g(j).
  Vector covariant(std::size_t a, std::size_t b) const {
    return Vector(g_.begin() + static_cast<std::ptrdiff_t>((a * n_ + b) * n_),
                  g_.begin() + static_cast<std::ptrdiff_t>((a * n_ + b + 1) * n_));
  }

  /// max |gamma(a,b,c) + gamma(a,c,b)|; zero for a metric connection.
  double metric_defect() const {
    double d = 0.0;
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = 0; b < n_; ++b)
        for (std::size_t c = 0; c < n_; ++c)
          d = std::max(d, std::abs((*this)(a, b, c) + (*this)(a, c, b)));
    return d;
  }

 private:
  std::size_t n_;
  std::vector<double> g_;
};

inline double max_difference(const ConnectionTable& a, const ConnectionTable& b) {
  if (a.dim() != b.dim()) throw ShapeError("connection tables differ in dimension");
  double d = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
  return d;
}

/// nabla_x y = [x,y]/2, nabla_x w = nabla_w x = -j(w)x/2, nabla_w w' = 0.
inline ConnectionTable connection_closed_form(const SkewPencil& p) {
  const std::size_t m = p.m(), n = p.dim();
  ConnectionTable g(n);
  for (std::size_t i = 0; i < p.k(); ++i) {
    const Matrix& Ji = p[i];
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) {
        g(a, b, m + i) = 0.5 * Ji(b, a);   // <[e_a, e_b], z_i> / 2
        g(a, m + i, b) = -0.5 * Ji(b, a);  // -J_i e_a / 2, component b
        g(m + i, a, b) = -0.5 * Ji(b, a);
      }
    }
  }
  return g;
}

/// c(a, b, c) = < [e_a, e_b], e_c >.
inline std::vector<double> structure_constants(const SkewPencil& p) {
  const std::size_t m = p.m(), n = p.dim();
  std::vector<double> c(n * n * n, 0.0);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      const Vector br = bracket(p, unit_vector(m, a), unit_vector(m, b));
      for (std::size_t i = 0; i < p.k(); ++i) c[(a * n + b) * n + m + i] = br[i];
    }
  return c;
}

/// Koszul formula for left-invariant fields on an orthonormal frame:
/// 2<nabla_X Y, Z> = <[X,Y],Z> - <[Y,Z],X> + <[Z,X],Y>.
/// Built from structure constants alone.
inline ConnectionTable connection_koszul(const SkewPencil& p) {
  const std::size_t n = p.dim();
  const std::vector<double> c = structure_constants(p);
  const auto C = [&](std::size_t a, std::size_t b, std::size_t d) { return c[(a * n + b) * n + d]; };
  ConnectionTable g(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t d = 0; d < n; ++d) g(a, b, d) = 0.5 * (C(a, b, d) - C(b, d, a) + C(d, a, b));
  return g;
}

// ---------------------------------------------------------------------------
// Curvature.

/// r(a, b, c, d) = < R(e_a, e_b) e_c, e_d > with
/// R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z.
class CurvatureTensor {
 public:
  explicit CurvatureTensor(std::size_t n) : n_(n), r_(n * n * n * n, 0.0) {}
  std::size_t dim() const { return n_; }
  double& operator()(std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    return r_[((a * n_ + b) * n_ + c) * n_ + d];
  }
  double operator()(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const {
    return r_[((a * n_ + b) * n_ + c) * n_ + d];
  }

 private:
  std::size_t n_;
  std::vector<double> r_;
};

/// Curvature from the Koszul connection and the structure constants.
inline CurvatureTensor curvature_tensor(const SkewPencil& p) {
  const std::size_t n = p.dim();
  const ConnectionTable g = connection_koszul(p);
  const std::vector<double> c = structure_constants(p);
  CurvatureTensor r(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t cc = 0; cc < n; ++cc)
        for (std::size_t d = 0; d < n; ++d) {
          double s = 0.0;
          for (std::size_t e = 0; e < n; ++e) {
            s += g(b, cc, e) * g(a, e, d) - g(a, cc, e) * g(b, e, d);
            s -= c[(a * n + b) * n + e] * g(e, cc, d);
          }
          r(a, b, cc, d) = s;
        }
  return r;
}

/// Ric(b, c) = sum_a < R(e_a, e_b) e_c, e_a >.
inline Matrix ricci_from_curvature(const CurvatureTensor& r) {
  const std::size_t n = r.dim();
  Matrix ric(n, n);
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t c = 0; c < n; ++c) {
      double s = 0.0;
      for (std::size_t a = 0; a < n; ++a) s += r(a, b, c, a);
      ric(b, c) = s;
    }
  return ric;
}

/// Ricci tensor of the left-invariant metric as a symmetric form on g(j).
struct RicciForm {
  std::size_t m = 0;
  std::size_t k = 0;
  Matrix form;  ///< (m+k) x (m+k)

  Matrix v_block() const { return block(form, 0, 0, m, m); }
  Matrix z_block() const { return block(form, m, m, k, k); }
  Matrix cross_block() const { return block(form, 0, m, m, k); }
};

/// Closed form: v-block (1/2) sum J_i^2, z-block (1/4) tr(J_i^T J_j), no cross terms.
inline RicciForm ricci_form(const SkewPencil& p) {
  const std::size_t m = p.m(), k = p.k();
  RicciForm r{m, k, Matrix(m + k, m + k)};
  Matrix vv(m, m);
  for (const auto& Ji : p.generators()) vv += Ji * Ji;
  vv = 0.5 * (vv + vv.transpose());
  set_block(r.form, 0, 0, 0.5 * vv);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      double s = 0.0;
      for (std::size_t e = 0; e < m * m; ++e) s += p[i].entries()[e] * p[j].entries()[e];
      r.form(m + i, m + j) = 0.25 * s;
    }
  return r;
}

/// Constant scalar curvature of the nilmanifold: -(1/4) sum_i |J_i|_F^2.
inline double scal_ambient(const SkewPencil& p) {
  double s = 0.0;
  for (const auto& Ji : p.generators()) {
    const double f = frobenius_norm(Ji);
    s += f * f;
  }
  return -0.25 * s;
}

}  // namespace nilspec
