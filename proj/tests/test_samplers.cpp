// Distribution samplers and test fixtures: Helmert/preshape geometry, the
// rejection sampler on the complex sphere (moment checks against closed
// forms), the frame chain sampler (uniform limit and small-angle moments),
// outlier generators, contamination bookkeeping, and Haar factors.

#include "doctest.h"

#include "pfm/manifolds.hpp"
#include "pfm/rng.hpp"
#include "pfm/samplers.hpp"

#include <cmath>
#include <set>

using namespace pfm;

TEST_SUITE("samplers") {

TEST_CASE("helmert submatrix") {
  const Matrix h2 = helmert_submatrix(2);
  REQUIRE(h2.rows() == 1);
  REQUIRE(h2.cols() == 2);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(h2(0, 0) == doctest::Approx(s).epsilon(1e-15));
  CHECK(h2(0, 1) == doctest::Approx(-s).epsilon(1e-15));

  const Matrix h4 = helmert_submatrix(4);
  REQUIRE(h4.rows() == 3);
  REQUIRE(h4.cols() == 4);
  CHECK((h4 * h4.transpose() - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <
        1e-14);
  CHECK((h4 * Vector::Ones(4)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK_THROWS_AS(helmert_submatrix(1), InvalidInput);
}

TEST_CASE("preshape removes translation and scale") {
  Pcg64 rng(61u, 0u);
  CVector config(5);
  for (int i = 0; i < 5; ++i) config[i] = rng.cnormal();

  const CVector z = preshape(config);
  REQUIRE(z.size() == 4);
  CHECK(z.norm() == doctest::Approx(1.0).epsilon(1e-14));

  const Complex shift(3.0, -2.0);
  const CVector translated = config + CVector::Constant(5, shift);
  CHECK((preshape(translated) - z).norm() < 1e-12);
  CHECK((preshape(CVector(2.5 * config)) - z).norm() < 1e-12);

  CHECK_THROWS_AS(preshape(CVector::Constant(4, Complex(1.0, 1.0))),
                  InvalidInput);
}

TEST_CASE("complex sphere sampler: uniform limit moments") {
  Pcg64 rng(62u, 0u);
  ComplexBinghamParams params;
  params.lambda = CMatrix::Zero(3, 3);
  const std::vector<CVector> draws = sample_complex_bingham(params, 20000, rng);

  CMatrix second = CMatrix::Zero(3, 3);
  for (const CVector& z : draws) {
    REQUIRE(std::abs(z.norm() - 1.0) < 1e-12);
    second += z * z.adjoint();
  }
  second /= static_cast<double>(draws.size());
  // Uniform on the unit complex sphere: E[z z*] = I / 3.
  CHECK((second - CMatrix::Identity(3, 3) / 3.0).cwiseAbs().maxCoeff() < 0.02);
}

TEST_CASE("complex sphere sampler: concentration around the mode") {
  Pcg64 rng(63u, 0u);
  CVector z0(3);
  z0 << 0.0, 1.0, 0.0;
  ComplexBinghamParams params;
  params.lambda = 150.0 * (z0 * z0.adjoint());
  const std::vector<CVector> draws = sample_complex_bingham(params, 4000, rng);

  // In the eigenbasis the off-mode mass |w_j|^2 is truncated-exponential with
  // rate 150, so E[1 - |z0* z|^2] ~ 2/150.
  double mass = 0.0;
  for (const CVector& z : draws) mass += std::norm(z0.dot(z));
  mass /= static_cast<double>(draws.size());
  CHECK(mass > 0.975);
  CHECK(mass < 0.995);
}

TEST_CASE("complex sphere sampler: shift invariance of the parameter") {
  CVector z0(3);
  z0 << 1.0, 0.0, 0.0;
  ComplexBinghamParams a, b;
  a.lambda = 40.0 * (z0 * z0.adjoint());
  b.lambda = a.lambda + 7.5 * CMatrix::Identity(3, 3);

  Pcg64 rng_a(64u, 0u), rng_b(64u, 0u);
  const auto da = sample_complex_bingham(a, 50, rng_a);
  const auto db = sample_complex_bingham(b, 50, rng_b);
  for (std::size_t i = 0; i < da.size(); ++i)
    CHECK((da[i] - db[i]).norm() == 0.0);
}

TEST_CASE("frame chain sampler: uniform limit second moments") {
  Pcg64 rng(65u, 0u);
  FrameWatsonParams params;
  params.kappas = Eigen::Vector3d::Zero();
  params.mode = Matrix::Identity(3, 3);
  const auto draws = sample_frame_watson(params, 5000, rng);
  REQUIRE(draws.size() == 5000);

  for (int axis = 0; axis < 3; ++axis) {
    Matrix second = Matrix::Zero(3, 3);
    for (const ProjStiefelPoint& f : draws)
      second += f.x.col(axis) * f.x.col(axis).transpose();
    second /= static_cast<double>(draws.size());
    CAPTURE(axis);
    CHECK((second - Matrix::Identity(3, 3) / 3.0).cwiseAbs().maxCoeff() < 0.05);
  }
}

TEST_CASE("frame chain sampler: small-angle moments at high concentration") {
  // With concentrations (100, 100, 100) the per-axis tilt angle is
  // two-coordinate Rayleigh with coordinate variance 1/(2*(100+100)), giving
  // mean angle sqrt(pi/2)/20 ~ 0.0627.
  Pcg64 rng(66u, 0u);
  FrameWatsonParams params;
  params.kappas = Eigen::Vector3d(100.0, 100.0, 100.0);
  params.mode = Matrix::Identity(3, 3);
  const auto draws = sample_frame_watson(params, 2000, rng);

  const ProjStiefelPoint mode =
      ProjStiefelPoint::canonical(Matrix::Identity(3, 3));
  Vector mean_angle = Vector::Zero(3);
  for (const ProjStiefelPoint& f : draws)
    mean_angle += frame_angular_errors(f, mode);
  mean_angle /= static_cast<double>(draws.size());
  for (int axis = 0; axis < 3; ++axis) {
    CAPTURE(axis);
    CHECK(mean_angle[axis] > 0.055);
    CHECK(mean_angle[axis] < 0.071);
  }
}

TEST_CASE("frame chain sampler: anisotropy and a rotated mode") {
  Pcg64 rng(67u, 0u);
  Matrix mode(3, 3);
  const double t = 0.9;
  mode << std::cos(t), -std::sin(t), 0.0,
          std::sin(t),  std::cos(t), 0.0,
          0.0,          0.0,         1.0;
  FrameWatsonParams params;
  params.kappas = Eigen::Vector3d(2500.0, 100.0, 100.0);
  params.mode = mode;
  const auto draws = sample_frame_watson(params, 1500, rng);

  const ProjStiefelPoint center = ProjStiefelPoint::canonical(mode);
  Vector mean_angle = Vector::Zero(3);
  for (const ProjStiefelPoint& f : draws)
    mean_angle += frame_angular_errors(f, center);
  mean_angle /= static_cast<double>(draws.size());

  // Coordinate variances: axis 1 pairs the two concentrated directions
  // (1/5200 each); axes 2 and 3 each pair one tight and one loose direction.
  CHECK(mean_angle[0] < 0.5 * mean_angle[1]);
  CHECK(mean_angle[1] > 0.04);
  CHECK(mean_angle[1] < 0.08);
  CHECK(mean_angle[2] > 0.04);
  CHECK(mean_angle[2] < 0.08);

  // Draws are canonical representatives.
  for (const ProjStiefelPoint& f : draws) {
    REQUIRE(f.valid(1e-8));
    for (int j = 0; j < 3; ++j) {
      int arg = 0;
      f.x.col(j).cwiseAbs().maxCoeff(&arg);
      REQUIRE(f.x(arg, j) > 0.0);
    }
  }
}

TEST_CASE("frame chain sampler: determinism and input checks") {
  FrameWatsonParams params;
  params.kappas = Eigen::Vector3d(10.0, 5.0, 1.0);
  params.mode = Matrix::Identity(3, 3);
  Pcg64 a(68u, 0u), b(68u, 0u);
  const auto da = sample_frame_watson(params, 20, a);
  const auto db = sample_frame_watson(params, 20, b);
  for (std::size_t i = 0; i < da.size(); ++i)
    CHECK((da[i].x - db[i].x).cwiseAbs().maxCoeff() == 0.0);

  FrameWatsonParams bad = params;
  bad.mode = 2.0 * Matrix::Identity(3, 3);
  Pcg64 c(68u, 0u);
  CHECK_THROWS_AS(sample_frame_watson(bad, 5, c), InvalidInput);
}

TEST_CASE("shape outliers live on the far submanifold") {
  Pcg64 rng(69u, 0u);
  const CVector z0 = random_complex_unit_vector(4, rng);
  for (int i = 0; i < 50; ++i) {
    const CVector out = shape_outlier(z0, rng);
    REQUIRE(std::abs(out.norm() - 1.0) < 1e-12);
    REQUIRE(std::abs(z0.dot(out)) < 1e-10);
  }
}

TEST_CASE("contaminating frame fixture") {
  const ProjStiefelPoint f = frame_outlier();
  REQUIRE(f.valid(1e-12));
  const double s3 = std::sqrt(3.0);
  Matrix expect(3, 3);
  expect << 1.0 / s3, -2.0 * s3 / 6.0,   -2.0 * s3 / 6.0,
            1.0 / s3, (s3 + 3.0) / 6.0,  (s3 - 3.0) / 6.0,
            1.0 / s3, (s3 - 3.0) / 6.0,  (s3 + 3.0) / 6.0;
  CHECK((f.x - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("contamination replaces exactly the reported indices") {
  Pcg64 rng(70u, 0u);
  std::vector<int> sample(20);
  for (int i = 0; i < 20; ++i) sample[static_cast<std::size_t>(i)] = i;

  const std::function<int(Pcg64&)> source = [](Pcg64&) { return -1; };
  std::vector<int> working = sample;
  const std::vector<int> replaced = contaminate(working, 6, source, rng);

  REQUIRE(replaced.size() == 6);
  CHECK(std::set<int>(replaced.begin(), replaced.end()).size() == 6);
  for (std::size_t i = 1; i < replaced.size(); ++i)
    CHECK(replaced[i - 1] < replaced[i]);
  for (int i = 0; i < 20; ++i) {
    const bool hit = std::find(replaced.begin(), replaced.end(), i) !=
                     replaced.end();
    CHECK(working[static_cast<std::size_t>(i)] == (hit ? -1 : i));
  }

  std::vector<int> none = sample;
  CHECK(contaminate(none, 0, source, rng).empty());
  CHECK(none == sample);
  std::vector<int> all = sample;
  CHECK(contaminate(all, 20, source, rng).size() == 20);
  CHECK_THROWS_AS(contaminate(all, 21, source, rng), InvalidInput);
}

TEST_CASE("haar factors are orthonormal and deterministic") {
  Pcg64 rng(71u, 0u);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix q = random_orthogonal(4, rng);
    CHECK((q.transpose() * q - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() <
          1e-12);
    const CMatrix u = random_unitary(3, rng);
    CHECK((u.adjoint() * u - CMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() <
          1e-12);
    CHECK(std::abs(random_unit_vector(5, rng).norm() - 1.0) < 1e-13);
    CHECK(std::abs(random_complex_unit_vector(4, rng).norm() - 1.0) < 1e-13);
    const StiefelPoint s = random_stiefel(5, 2, rng);
    REQUIRE(s.valid(1e-10));
  }

  // Uniformity smoke: column means of many orthogonal draws vanish.
  Matrix mean = Matrix::Zero(3, 3);
  for (int i = 0; i < 4000; ++i) mean += random_orthogonal(3, rng);
  mean /= 4000.0;
  CHECK(mean.cwiseAbs().maxCoeff() < 0.05);

  Pcg64 r1(72u, 0u), r2(72u, 0u);
  CHECK((random_orthogonal(4, r1) - random_orthogonal(4, r2))
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

}  // TEST_SUITE
