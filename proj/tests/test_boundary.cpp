#include <catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "nilspec/nilspec.hpp"
#include "test_support.hpp"

using namespace nilspec;
using namespace nilspec::testing;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double kPi = std::numbers::pi;

struct Lift {
  Vector x, z;
};

// Classical RK4 on x'' = -x, z' = [x, x']/2 (the horizontal condition in
// exponential coordinates), starting at (x, z0) with velocity y.
Lift rk4_lift(const SkewPencil& p, const Vector& x0, const Vector& y0, const Vector& z0, double t_end,
              double h = 1e-3) {
  const std::size_t m = p.m(), k = p.k();
  // state = (x, xi, z)
  Vector s(2 * m + k);
  std::copy(x0.begin(), x0.end(), s.begin());
  std::copy(y0.begin(), y0.end(), s.begin() + static_cast<long>(m));
  std::copy(z0.begin(), z0.end(), s.begin() + static_cast<long>(2 * m));
  const auto f = [&](const Vector& st) {
    Vector d(st.size());
    const std::span<const double> x(st.data(), m), xi(st.data() + m, m);
    for (std::size_t i = 0; i < m; ++i) {
      d[i] = xi[i];
      d[m + i] = -x[i];
    }
    // [x, xi]_i = xi^T J_i x
    for (std::size_t i = 0; i < k; ++i) {
      double b = 0.0;
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < m; ++c) b += xi[r] * p[i](r, c) * x[c];
      d[2 * m + i] = 0.5 * b;
    }
    return d;
  };
  const std::size_t steps = static_cast<std::size_t>(std::llround(t_end / h));
  const double dt = t_end / static_cast<double>(steps);
  for (std::size_t n = 0; n < steps; ++n) {
    const Vector k1 = f(s);
    const Vector k2 = f(s + (0.5 * dt) * k1);
    const Vector k3 = f(s + (0.5 * dt) * k2);
    const Vector k4 = f(s + dt * k3);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  }
  return {Vector(s.begin(), s.begin() + static_cast<long>(m)), Vector(s.begin() + static_cast<long>(2 * m), s.end())};
}

}  // namespace

TEST_CASE("boundary frame", "[boundary]") {
  const SkewPencil p = reference_pencil();
  const BoundaryFrame f = boundary_frame(p, unit_vector(6, 0));
  CHECK(f.normal == unit_vector(8, 0));
  REQUIRE(f.tangent.size() == 7);
  for (std::size_t i = 0; i < 7; ++i) CHECK(max_abs_diff(f.tangent[i], unit_vector(8, i + 1)) < 1e-15);

  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector x = random_unit(6, rng);
    const BoundaryFrame g = boundary_frame(p, x);
    std::vector<Vector> all{g.normal};
    all.insert(all.end(), g.tangent.begin(), g.tangent.end());
    Matrix q(8, 8);
    for (std::size_t c = 0; c < 8; ++c) q.set_col(c, all[c]);
    CHECK(orthogonality_defect(q) < 1e-13);
  }
  CHECK_THROWS_AS(boundary_frame(p, Vector{1, 1, 0, 0, 0, 0}), DomainError);
  CHECK_THROWS_AS(boundary_frame(p, Vector{1, 0}), ShapeError);
}

TEST_CASE("scal_at on the reference family", "[boundary]") {
  const SkewPencil p = reference_pencil();
  CHECK_THAT(scal_at(p, unit_vector(6, 4)), WithinAbs(17.5, 1e-12));
  CHECK_THAT(scal_at(p, unit_vector(6, 1)), WithinAbs(13.0, 1e-12));
  const ScalReport r = scal_via_shape(p, unit_vector(6, 4));
  CHECK_THAT(r.scal_closed_form, WithinAbs(17.5, 1e-12));
  CHECK_THAT(r.scal_shape, WithinAbs(17.5, 1e-12));
  CHECK_THAT(r.ric_xx, WithinAbs(-5.0, 1e-12));
  CHECK_THAT(r.ambient, WithinAbs(-7.5, 1e-12));
  CHECK_THROWS_AS(scal_at(p, Vector{0.5, 0, 0, 0, 0, 0}), DomainError);
}

TEST_CASE("scal_at does not depend on the fiber coordinate", "[boundary]") {
  const SkewPencil p = reference_pencil(0.05);
  const LatticeBasis L = LatticeBasis::standard(2);
  const Vector x = (1.0 / std::sqrt(2.0)) * (unit_vector(6, 0) + unit_vector(6, 3));
  const BoundaryPoint a = BoundaryPoint::make(L, x, Vector{0.2, 0.9});
  const BoundaryPoint b = BoundaryPoint::make(L, x, Vector{3.2, -4.1});
  CHECK(max_abs_diff(a.zbar, b.zbar) < 1e-12);
  CHECK(scal_at(p, a) == scal_at(p, b));
  CHECK(scal_via_shape(p, a).scal_shape == scal_via_shape(p, BoundaryPoint{x, {0.7, 0.1}}).scal_shape);
  CHECK_THROWS_AS(BoundaryPoint::make(L, Vector{2, 0, 0, 0, 0, 0}, Vector{0, 0}), DomainError);
}

TEST_CASE("two routes to the boundary scalar curvature", "[boundary]") {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int pencil = 0; pencil < 20; ++pencil) {
    const std::size_t m = 3 + static_cast<std::size_t>(pencil % 5), k = 1 + static_cast<std::size_t>(pencil % 3);
    const SkewPencil p = random_pencil(m, k, rng);
    for (int point = 0; point < 100; ++point) {
      const Vector x = random_unit(m, rng);
      const ScalReport r = scal_via_shape(p, x);
      const double direct = scal_at(p, x);
      worst = std::max(worst, std::abs(r.scal_shape - direct) / scale_of(direct));
      CHECK_THAT(r.shape_trace, WithinAbs(static_cast<double>(m - 1), 1e-12));
      CHECK_THAT(r.trace_nabla_x, WithinAbs(0.0, 1e-12));
      CHECK_THAT(r.nabla_x_norm2, WithinAbs(-r.ric_xx, 1e-10 * scale_of(r.ric_xx)));
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("scal_extremes", "[boundary]") {
  const ScalExtremes e0 = scal_extremes(reference_pencil());
  CHECK_THAT(e0.max, WithinAbs(17.5, 1e-12));
  CHECK_THAT(e0.min, WithinAbs(13.0, 1e-12));
  CHECK(max_abs_diff(e0.argmax_x, unit_vector(6, 4)) < 1e-12);
  CHECK(max_abs_diff(e0.argmin_x, unit_vector(6, 1)) < 1e-12);

  const SkewPencil mid = reference_pencil(1.0 / 16);
  const ScalExtremes e1 = scal_extremes(mid);
  CHECK(e1.max < 17.5 - 1e-3);
  CHECK_THAT(scal_at(mid, e1.argmax_x), WithinAbs(e1.max, 1e-12));
  CHECK_THAT(scal_at(mid, e1.argmin_x), WithinAbs(e1.min, 1e-12));

  // Oracle: dense sampling of the sphere never exceeds the reported extremes.
  std::mt19937_64 rng(3);
  for (int i = 0; i < 2000; ++i) {
    const double s = scal_at(mid, random_unit(6, rng));
    CHECK(s <= e1.max + 1e-12);
    CHECK(s >= e1.min - 1e-12);
  }

  const ScalExtremes flat = scal_extremes(abelian_pencil(5, 2));
  CHECK_THAT(flat.max, WithinAbs(12.0, 1e-12));
  CHECK_THAT(flat.min, WithinAbs(12.0, 1e-12));
}

TEST_CASE("horizontal lift", "[boundary]") {
  const SkewPencil p = reference_pencil();
  const Vector x = unit_vector(6, 0), y = unit_vector(6, 4), z0{0.25, -0.5};
  const GroupPoint start = horizontal_lift(p, x, y, z0, 0.0);
  CHECK(start.x == x);
  CHECK(start.z == z0);
  const GroupPoint half = horizontal_lift(p, x, y, z0, kPi);
  CHECK(max_abs_diff(half.x, -1.0 * x) < 1e-15);
  CHECK(max_abs_diff(half.z, Vector{0.25, -0.5 - kPi / 2}) < 1e-15);
  const GroupPoint full = horizontal_lift(p, x, y, z0, 2 * kPi);
  CHECK(max_abs_diff(full.x, x) < 1e-15);
  CHECK(max_abs_diff(full.z - z0, holonomy_displacement(p, x, y)) < 1e-14);

  const BoundaryPoint reduced = horizontal_lift(p, LatticeBasis::standard(2), x, y, z0, 2 * kPi);
  CHECK(max_abs_diff(reduced.zbar, LatticeBasis::standard(2).reduce(full.z)) == 0.0);

  CHECK_THROWS_AS(horizontal_lift(p, x, x, z0, 1.0), DomainError);
  CHECK_THROWS_AS(horizontal_lift(p, x, y, Vector{0}, 1.0), ShapeError);
}

TEST_CASE("holonomy displacement", "[boundary]") {
  const SkewPencil p = reference_pencil();
  CHECK(max_abs_diff(holonomy_displacement(p, unit_vector(6, 0), unit_vector(6, 4)), Vector{0, -kPi}) <
        1e-15);
  CHECK(holonomy_displacement(p, unit_vector(6, 1), unit_vector(6, 3)) == Vector{0, 0});
}

TEST_CASE("lifts agree with an RK4 integration", "[boundary]") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 6; ++trial) {
    const SkewPencil p = trial == 0 ? reference_pencil(0.03) : random_pencil(5, 2, rng);
    const auto [x, y] = random_orthonormal_pair(p.m(), rng);
    const Vector z0 = random_vector(p.k(), rng);
    for (double t : {1.0, kPi, 2 * kPi}) {
      const Lift num = rk4_lift(p, x, y, z0, t);
      const GroupPoint exact = horizontal_lift(p, x, y, z0, t);
      CHECK(max_abs_diff(num.x, exact.x) < 1e-6);
      CHECK(max_abs_diff(num.z, exact.z) < 1e-6);
    }
    const Lift loop = rk4_lift(p, x, y, z0, 2 * kPi);
    CHECK(max_abs_diff(loop.z - z0, holonomy_displacement(p, x, y)) < 1e-6);
  }
}

TEST_CASE("commuting directions close up", "[boundary]") {
  const SkewPencil p = reference_pencil();
  const LatticeBasis L = LatticeBasis::standard(2);
  const Vector x = unit_vector(6, 1), y = unit_vector(6, 3), z0{0.3, 0.4};
  CHECK(max_abs(bracket(p, x, y)) == 0.0);
  const BoundaryPoint end = horizontal_lift(p, L, x, y, z0, 2 * kPi);
  CHECK(max_abs_diff(end.x, x) < 1e-15);
  CHECK(max_abs_diff(end.zbar, z0) < 1e-15);
}

TEST_CASE("fiber geometry", "[boundary]") {
  CHECK(fiber_geometry_check(reference_pencil()).max_violation == 0.0);
  CHECK(fiber_geometry_check(abelian_pencil(4, 2)).max_violation == 0.0);
  std::mt19937_64 rng(50);
  for (int trial = 0; trial < 50; ++trial) {
    const SkewPencil p = random_pencil(3 + static_cast<std::size_t>(trial % 5), 1 + static_cast<std::size_t>(trial % 3), rng);
    CHECK(fiber_geometry_check(p).max_violation <= 1e-12);
  }
}
