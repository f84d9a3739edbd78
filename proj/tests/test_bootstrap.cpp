// Resampling machinery: degenerate-sample behavior, bitwise reproducibility,
// failure accounting, the tangent-plane log coordinates, and the pivotal
// confidence region (quantile logic, degenerate fallback, and containment).

#include "doctest.h"

#include "pfm/baselines.hpp"
#include "pfm/bootstrap.hpp"
#include "pfm/rng.hpp"
#include "pfm/samplers.hpp"

#include <cmath>
#include <stdexcept>

using namespace pfm;

TEST_SUITE("bootstrap") {

TEST_CASE("identical data yield zero standard errors") {
  Pcg64 rng(111u, 0u);
  const ProjStiefelPoint f =
      ProjStiefelPoint::canonical(random_orthogonal(3, rng));
  const std::vector<ProjStiefelPoint> data(9, f);
  const FrameEstimator est = [](const std::vector<ProjStiefelPoint>& d) {
    return pfm_proj_stiefel(d).point;
  };
  const BootstrapFrameReport rep = bootstrap_frames(data, est, 20,
                                                    RngSeed{1u, 0u});
  CHECK(rep.b_requested == 20);
  CHECK(rep.b_effective == 20);
  CHECK(rep.failures == 0);
  CHECK(rep.per_axis_se.maxCoeff() == 0.0);
  CHECK(rep.estimate.quotient_distance(f) < 1e-10);

  CVector z(3);
  z << 1.0, 0.0, 0.0;
  const std::vector<CVector> shapes(7, z);
  const ShapeEstimator sest = [](const std::vector<CVector>& d) {
    std::vector<CPPoint> pts;
    for (const CVector& v : d) pts.push_back(CPPoint::from_vector(v));
    return pfm::pfm(pts).point.representative();
  };
  const BootstrapShapeReport srep = bootstrap_shapes(shapes, sest, 16,
                                                     RngSeed{2u, 0u});
  CHECK(srep.se == 0.0);
  CHECK(srep.b_effective == 16);
}

TEST_CASE("fixed seeds reproduce bitwise; streams decorrelate") {
  Pcg64 rng(112u, 0u);
  FrameWatsonParams params;
  params.kappas = Eigen::Vector3d(200.0, 200.0, 200.0);
  params.mode = Matrix::Identity(3, 3);
  const auto data = sample_frame_watson(params, 25, rng);
  const FrameEstimator est = [](const std::vector<ProjStiefelPoint>& d) {
    return pfm_proj_stiefel(d).point;
  };

  const BootstrapFrameReport a = bootstrap_frames(data, est, 40,
                                                  RngSeed{7u, 3u});
  const BootstrapFrameReport b = bootstrap_frames(data, est, 40,
                                                  RngSeed{7u, 3u});
  CHECK((a.per_axis_se - b.per_axis_se).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.estimate.x - b.estimate.x).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.per_axis_se.minCoeff() > 0.0);

  const BootstrapFrameReport c = bootstrap_frames(data, est, 40,
                                                  RngSeed{7u, 4u});
  CHECK((a.per_axis_se - c.per_axis_se).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("estimator failures are counted, not propagated") {
  Pcg64 rng(113u, 0u);
  const ProjStiefelPoint f =
      ProjStiefelPoint::canonical(random_orthogonal(3, rng));
  const std::vector<ProjStiefelPoint> data(10, f);

  int calls = 0;
  const FrameEstimator flaky =
      [&calls, &f](const std::vector<ProjStiefelPoint>&) -> ProjStiefelPoint {
    if (++calls % 3 == 0) throw DegenerateFrame("synthetic failure");
    return f;
  };
  const BootstrapFrameReport rep = bootstrap_frames(data, flaky, 30,
                                                    RngSeed{3u, 0u});
  CHECK(rep.b_requested == 30);
  CHECK(rep.failures == 10);
  CHECK(rep.b_effective == 20);

  // Exceptions outside this library's hierarchy are not swallowed.
  const FrameEstimator broken =
      [](const std::vector<ProjStiefelPoint>&) -> ProjStiefelPoint {
    throw std::logic_error("not a statistics failure");
  };
  CHECK_THROWS_AS(bootstrap_frames(data, broken, 5, RngSeed{4u, 0u}),
                  std::logic_error);

  CHECK_THROWS_AS(bootstrap_frames({}, flaky, 5, RngSeed{5u, 0u}),
                  InvalidInput);
  CHECK_THROWS_AS(bootstrap_frames(data, flaky, 0, RngSeed{5u, 0u}),
                  InvalidInput);
}

TEST_CASE("tangent basis construction at an axis") {
  Vector e1(3);
  e1 << 1.0, 0.0, 0.0;
  const Eigen::Matrix<double, 3, 2> basis = tangent_basis_at_axis(e1);
  CHECK((basis.transpose() * basis - Matrix::Identity(2, 2))
            .cwiseAbs().maxCoeff() < 1e-14);
  CHECK((basis.transpose() * e1).cwiseAbs().maxCoeff() < 1e-14);

  // Works for any unit direction, deterministically.
  Pcg64 rng(114u, 0u);
  for (int t = 0; t < 20; ++t) {
    const Vector a = random_unit_vector(3, rng);
    const auto ba = tangent_basis_at_axis(a);
    CHECK((ba.transpose() * ba - Matrix::Identity(2, 2))
              .cwiseAbs().maxCoeff() < 1e-13);
    CHECK((ba.transpose() * a).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("log coordinates measure the tilt angle") {
  Vector at(3);
  at << 0.0, 0.0, 1.0;
  const auto basis = tangent_basis_at_axis(at);

  CHECK(axis_log_coordinates(at, basis, at).norm() == 0.0);
  CHECK(axis_log_coordinates(at, basis, Vector(-at)).norm() == 0.0);

  const double theta = 0.27;
  const Vector dir = basis.col(0);
  const Vector tilted = std::cos(theta) * at + std::sin(theta) * dir;
  const Eigen::Vector2d y = axis_log_coordinates(at, basis, tilted);
  CHECK(y.norm() == doctest::Approx(theta).epsilon(1e-12));
  CHECK(y[0] == doctest::Approx(theta).epsilon(1e-12));
  CHECK(std::abs(y[1]) < 1e-12);

  // Axial sign alignment: the antipode gives identical coordinates.
  const Eigen::Vector2d y2 = axis_log_coordinates(at, basis, Vector(-tilted));
  CHECK((y - y2).norm() < 1e-12);
}

TEST_CASE("ellipse containment in explicit coordinates") {
  Vector e3(3);
  e3 << 0.0, 0.0, 1.0;
  AxisEllipse ell;
  ell.center_axis = e3;
  ell.tangent_basis = tangent_basis_at_axis(e3);
  ell.second_moment = Eigen::Matrix2d::Identity();
  ell.radius2 = 0.04 * 0.04;  // angular radius 0.04 in every direction
  ell.degenerate = false;

  const auto tilt = [&](double theta, int col) {
    return Vector(std::cos(theta) * e3 +
                  std::sin(theta) * ell.tangent_basis.col(col));
  };
  CHECK(ell.contains(e3));
  CHECK(ell.contains(tilt(0.03, 0)));
  CHECK(ell.contains(tilt(0.03, 1)));
  CHECK_FALSE(ell.contains(tilt(0.06, 0)));
  CHECK(ell.contains(Vector(-tilt(0.03, 1))));  // axial symmetry

  AxisEllipse degen = ell;
  degen.degenerate = true;
  degen.interval_halfwidth = Eigen::Vector2d(0.1, 0.0);
  CHECK(degen.contains(tilt(0.05, 0)));
  CHECK_FALSE(degen.contains(tilt(0.05, 1)));
  CHECK(degen.contains(e3));
}

TEST_CASE("pivotal region: input checks and degenerate samples") {
  Pcg64 rng(115u, 0u);
  const ProjStiefelPoint f =
      ProjStiefelPoint::canonical(random_orthogonal(3, rng));
  const std::vector<ProjStiefelPoint> data(12, f);

  CHECK_THROWS_AS(pivotal_confidence_ellipse(data, 5, 0.95, RngSeed{1u, 0u}),
                  InvalidInput);
  CHECK_THROWS_AS(pivotal_confidence_ellipse(data, 50, 1.0, RngSeed{1u, 0u}),
                  InvalidInput);
  CHECK_THROWS_AS(pivotal_confidence_ellipse(data, 50, 0.0, RngSeed{1u, 0u}),
                  InvalidInput);

  const PivotalEllipseReport rep =
      pivotal_confidence_ellipse(data, 30, 0.95, RngSeed{1u, 0u});
  CHECK(rep.b_effective == 30);
  CHECK(rep.failures == 0);
  for (int axis = 0; axis < 3; ++axis) {
    CAPTURE(axis);
    CHECK(rep.axes[static_cast<std::size_t>(axis)].degenerate);
    CHECK(rep.axes[static_cast<std::size_t>(axis)]
              .interval_halfwidth.maxCoeff() == 0.0);
    CHECK(rep.axes[static_cast<std::size_t>(axis)].contains(
        Vector(rep.estimate.x.col(axis))));
  }
}

TEST_CASE("pivotal region on a concentrated sample") {
  Pcg64 rng(116u, 0u);
  FrameWatsonParams params;
  params.kappas = Eigen::Vector3d(100.0, 100.0, 100.0);
  params.mode = Matrix::Identity(3, 3);
  const auto data = sample_frame_watson(params, 50, rng);

  const PivotalEllipseReport rep =
      pivotal_confidence_ellipse(data, 100, 0.95, RngSeed{11u, 0u});
  CHECK(rep.level == doctest::Approx(0.95));
  CHECK(rep.b_requested == 100);
  CHECK(rep.b_effective + rep.failures == 100);
  REQUIRE(rep.b_effective >= 8);

  for (int axis = 0; axis < 3; ++axis) {
    const AxisEllipse& e = rep.axes[static_cast<std::size_t>(axis)];
    CAPTURE(axis);
    CHECK_FALSE(e.degenerate);
    CHECK(e.radius2 > 0.0);
    // The region covers its own center and, at these concentrations and this
    // seed, the population axis.
    CHECK(e.contains(Vector(rep.estimate.x.col(axis))));
    CHECK(e.contains(Vector(Matrix::Identity(3, 3).col(axis))));
    // Far-away axes are excluded.
    CHECK_FALSE(e.contains(Vector(Matrix::Identity(3, 3)
                                      .col((axis + 1) % 3))));
  }

  // Bitwise reproducibility of the whole region object.
  const PivotalEllipseReport rep2 =
      pivotal_confidence_ellipse(data, 100, 0.95, RngSeed{11u, 0u});
  for (int axis = 0; axis < 3; ++axis) {
    const AxisEllipse& a = rep.axes[static_cast<std::size_t>(axis)];
    const AxisEllipse& b = rep2.axes[static_cast<std::size_t>(axis)];
    CHECK(a.radius2 == b.radius2);
    CHECK((a.second_moment - b.second_moment).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("pivotal region honors a custom estimator") {
  Pcg64 rng(117u, 0u);
  FrameWatsonParams params;
  params.kappas = Eigen::Vector3d(300.0, 300.0, 300.0);
  params.mode = Matrix::Identity(3, 3);
  const auto data = sample_frame_watson(params, 30, rng);

  const FrameEstimator mean_est = [](const std::vector<ProjStiefelPoint>& d) {
    return frame_mean_axial(d).frame;
  };
  const PivotalEllipseReport rep = pivotal_confidence_ellipse(
      data, 60, 0.9, RngSeed{12u, 0u}, mean_est);
  const FrameMeanResult direct = frame_mean_axial(data);
  CHECK(rep.estimate.quotient_distance(direct.frame) < 1e-8);
}

}  // TEST_SUITE
