// Metric projections and the projected median: closed-form polar/eigen
// oracles, optimality against random manifold points, idempotence,
// equivariance, degenerate-input rejection, and angular error conventions.

#include "doctest.h"

#include "pfm/manifolds.hpp"
#include "pfm/rng.hpp"
#include "pfm/samplers.hpp"

#include <cmath>

using namespace pfm;

TEST_SUITE("manifolds") {

TEST_CASE("polar projection closed forms") {
  Matrix a(2, 2);
  a << 2.0, 0.0,
       0.0, 3.0;
  CHECK((project_stiefel(a).x - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <
        1e-14);

  Matrix b(2, 2);
  b << 0.0, -2.0,
       3.0,  0.0;
  Matrix rot(2, 2);
  rot << 0.0, -1.0,
         1.0,  0.0;
  CHECK((project_stiefel(b).x - rot).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("polar projection is idempotent and equivariant") {
  Pcg64 rng(21u, 0u);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix a(5, 2);
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 5; ++i) a(i, j) = rng.normal();
    const StiefelPoint p = project_stiefel(a);
    REQUIRE(p.valid(1e-10));
    CHECK((project_stiefel(p.x).x - p.x).cwiseAbs().maxCoeff() < 1e-12);

    const Matrix u = random_orthogonal(5, rng);
    const Matrix v = random_orthogonal(2, rng);
    const Matrix lhs = project_stiefel(u * a * v.transpose()).x;
    CHECK((lhs - u * p.x * v.transpose()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("polar projection beats random frames") {
  Pcg64 rng(22u, 0u);
  Matrix a(4, 2);
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 4; ++i) a(i, j) = rng.normal();
  const StiefelPoint p = project_stiefel(a);
  const double best = (a - p.x).norm();
  for (int trial = 0; trial < 500; ++trial) {
    const StiefelPoint q = random_stiefel(4, 2, rng);
    CHECK((a - q.x).norm() >= best - 1e-10);
  }
}

TEST_CASE("rank-deficient inputs are rejected") {
  Matrix a(3, 2);
  a.setZero();
  a(0, 0) = 1.0;  // second singular value is zero
  CHECK_THROWS_AS(project_stiefel(a), DegenerateProjection);
  CHECK_THROWS_AS(project_grassmann(Matrix::Identity(3, 3), 1),
                  DegenerateProjection);
  CHECK_THROWS_AS(project_cp(CMatrix::Identity(2, 2)), DegenerateProjection);
}

TEST_CASE("subspace projection closed forms") {
  Matrix a(3, 3);
  a.setZero();
  a(0, 0) = 3.0;
  a(1, 1) = 2.0;
  a(2, 2) = 1.0;
  const GrassmannPoint p1 = project_grassmann(a, 1);
  Matrix e11 = Matrix::Zero(3, 3);
  e11(0, 0) = 1.0;
  CHECK((p1.p - e11).cwiseAbs().maxCoeff() < 1e-14);
  REQUIRE(p1.valid(1e-12));

  const GrassmannPoint p2 = project_grassmann(a, 2);
  Matrix d2 = Matrix::Zero(3, 3);
  d2(0, 0) = 1.0;
  d2(1, 1) = 1.0;
  CHECK((p2.p - d2).cwiseAbs().maxCoeff() < 1e-14);
  CHECK_THROWS_AS(project_grassmann(a, 0), InvalidInput);
  CHECK_THROWS_AS(project_grassmann(a, 3), InvalidInput);
}

TEST_CASE("subspace projection beats random projectors") {
  Pcg64 rng(23u, 0u);
  Matrix g(4, 4);
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) g(i, j) = rng.normal();
  const Matrix a = 0.5 * (g + g.transpose());
  const GrassmannPoint p = project_grassmann(a, 2);
  const double best = (a - p.p).norm();
  for (int trial = 0; trial < 500; ++trial) {
    const StiefelPoint basis = random_stiefel(4, 2, rng);
    const Matrix q = basis.x * basis.x.transpose();
    CHECK((a - q).norm() >= best - 1e-10);
  }
}

TEST_CASE("grassmann equivariance under conjugation") {
  Pcg64 rng(24u, 0u);
  Matrix g(4, 4);
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) g(i, j) = rng.normal();
  const Matrix a = 0.5 * (g + g.transpose());
  const Matrix q = random_orthogonal(4, rng);
  const Matrix lhs = project_grassmann(q * a * q.transpose(), 2).p;
  const Matrix rhs = q * project_grassmann(a, 2).p * q.transpose();
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("leading-eigenprojector closed form and phase invariance") {
  Pcg64 rng(25u, 0u);
  CVector z = random_complex_unit_vector(3, rng);
  CVector w = random_complex_unit_vector(3, rng);
  w -= z * (z.dot(w));  // orthogonalize against z (Eigen dot conjugates z)
  w.normalize();
  const CMatrix a = 2.0 * (z * z.adjoint()) + 0.5 * (w * w.adjoint());
  const CPPoint p = project_cp(a);
  CHECK((p.p - z * z.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  REQUIRE(p.valid(1e-10));

  // Multiplying the underlying vector by a phase changes nothing.
  const CVector zp = std::polar(1.0, 0.77) * z;
  const CMatrix a2 = 2.0 * (zp * zp.adjoint()) + 0.5 * (w * w.adjoint());
  CHECK((project_cp(a2).p - p.p).cwiseAbs().maxCoeff() < 1e-12);

  const CMatrix u = random_unitary(3, rng);
  const CMatrix lhs = project_cp(u * a * u.adjoint()).p;
  CHECK((lhs - u * p.p * u.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("projected median on trivial clouds") {
  Pcg64 rng(26u, 0u);
  const StiefelPoint q = random_stiefel(4, 2, rng);
  const std::vector<StiefelPoint> same(5, q);
  const auto res = pfm::pfm(same);
  CHECK(res.ambient.converged);
  CHECK((res.point.x - q.x).cwiseAbs().maxCoeff() < 1e-10);

  const CPPoint c = CPPoint::from_vector(random_complex_unit_vector(3, rng));
  const std::vector<CPPoint> same_c(4, c);
  CHECK((pfm::pfm(same_c).point.p - c.p).cwiseAbs().maxCoeff() < 1e-10);

  const GrassmannPoint g = GrassmannPoint::from_basis(q.x);
  const std::vector<GrassmannPoint> same_g(3, g);
  CHECK((pfm::pfm(same_g).point.p - g.p).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("projected median rejects points off the manifold") {
  StiefelPoint bad;
  bad.x = 2.0 * Matrix::Identity(3, 2);
  CHECK_THROWS_AS(pfm::pfm(std::vector<StiefelPoint>{bad}), InvalidInput);
  CHECK_THROWS_AS(pfm::pfm(std::vector<StiefelPoint>{}), InvalidInput);

  GrassmannPoint bg;
  bg.p = 0.5 * Matrix::Identity(3, 3);
  bg.r = 1;
  CHECK_THROWS_AS(pfm::pfm(std::vector<GrassmannPoint>{bg}), InvalidInput);
}

TEST_CASE("projected median tolerates a minority of gross outliers") {
  Pcg64 rng(27u, 0u);
  CVector z0(3);
  z0 << 1.0, 0.0, 0.0;
  ComplexBinghamParams params;
  params.lambda = 200.0 * (z0 * z0.adjoint());
  const std::vector<CVector> draws = sample_complex_bingham(params, 40, rng);

  // A coherent outlier cluster halfway between the target axis and an
  // orthogonal direction: its embedding carries a large cross term, so the
  // extrinsic mean tilts by O(contamination fraction) while a minority atom
  // leaves the spatial median at inlier scale.
  CVector w45(3);
  w45 << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0;

  std::vector<CPPoint> pts;
  for (const CVector& z : draws) pts.push_back(CPPoint::from_vector(z));
  for (int i = 0; i < 12; ++i)
    pts[static_cast<std::size_t>(i)] = CPPoint::from_vector(w45);

  const auto med = pfm::pfm(pts);
  const auto mean = extrinsic_mean(pts);
  const double err_med = angular_error(med.point.representative(), z0);
  const double err_mean = angular_error(mean.representative(), z0);
  CHECK(err_med < 0.1);
  CHECK(err_mean > 2.0 * err_med);
}

TEST_CASE("extrinsic mean of a symmetric pair lies between") {
  // Two subspaces tilted symmetrically about e1: the projected mean must be
  // the bisector, here span(e1).
  const double t = 0.4;
  Vector x1(2), x2(2);
  x1 << std::cos(t), std::sin(t);
  x2 << std::cos(t), -std::sin(t);
  Matrix b1(2, 1), b2(2, 1);
  b1.col(0) = x1;
  b2.col(0) = x2;
  const std::vector<GrassmannPoint> data = {GrassmannPoint::from_basis(b1),
                                            GrassmannPoint::from_basis(b2)};
  const GrassmannPoint m = extrinsic_mean(data);
  Matrix e11 = Matrix::Zero(2, 2);
  e11(0, 0) = 1.0;
  CHECK((m.p - e11).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("angular error conventions") {
  Vector a(3), b(3);
  a << 1.0, 0.0, 0.0;
  const double t = 0.3;
  b << std::cos(t), std::sin(t), 0.0;
  CHECK(angular_error(a, b) == doctest::Approx(t).epsilon(1e-12));
  CHECK(angular_error(a, Vector(-b)) == doctest::Approx(t).epsilon(1e-12));
  CHECK(angular_error(a, a) == doctest::Approx(0.0).scale(1.0));
  CHECK(angular_error(a, Vector(5.0 * b)) == doctest::Approx(t).epsilon(1e-12));

  Pcg64 rng(28u, 0u);
  const CVector z = random_complex_unit_vector(4, rng);
  const CVector zp = std::polar(1.0, -1.3) * z;
  CHECK(angular_error(z, zp) < 1e-12);
}

}  // TEST_SUITE
