#pragma once

#include "pfm/proj_stiefel.hpp"
#include "pfm/rng.hpp"

#include <array>
#include <functional>
#include <optional>

namespace pfm {

using FrameEstimator =
    std::function<ProjStiefelPoint(const std::vector<ProjStiefelPoint>&)>;

// Nonparametric bootstrap of an axial-frame estimator. Per-axis standard
// error = sd over resamples of the angle arccos |m_j^t m_j^(b)| between the
// resampled axis and the point estimate. Failed resamples (estimator throws)
// are recorded and excluded.
struct BootstrapFrameReport {
  ProjStiefelPoint estimate;
  Eigen::Vector3d per_axis_se = Eigen::Vector3d::Zero();
  int b_requested = 0;
  int b_effective = 0;
  int failures = 0;
};

BootstrapFrameReport bootstrap_frames(const std::vector<ProjStiefelPoint>& data,
                                      const FrameEstimator& estimator, int b,
                                      RngSeed seed);

// Shape-space analogue: scalar SE of the angles between resampled estimates
// and the point estimate (phase alignment cannot change those angles).
struct BootstrapShapeReport {
  CVector estimate;
  double se = 0.0;
  int b_requested = 0;
  int b_effective = 0;
  int failures = 0;
};

using ShapeEstimator = std::function<CVector(const std::vector<CVector>&)>;

BootstrapShapeReport bootstrap_shapes(const std::vector<CVector>& data,
                                      const ShapeEstimator& estimator, int b,
                                      RngSeed seed);

// Pivotal tangent-plane confidence region for one axis. Bootstrap axes are
// sign-aligned to the point estimate and log-mapped into a fixed 2-d
// orthonormal tangent basis at it; the squared radius is the level quantile
// of the bootstrap Mahalanobis distances. Two calibration strategies:
//  - "StudentizedTangentEllipse" (default median estimator): each resample's
//    deviation is studentized by that resample's own sandwich covariance
//    (ambient H^+ J H^+ / n pushed through the projection derivative), and
//    `second_moment` holds the full-sample sandwich covariance. Studentizing
//    removes the downward spread bias of resampled medians, which otherwise
//    costs several points of coverage at n ~ 50.
//  - "PivotalTangentEllipse" (custom estimators, or when the sandwich is
//    unavailable): `second_moment` is the uncentered second moment of the
//    bootstrap cloud and the quantile is taken over its own Mahalanobis
//    distances.
struct AxisEllipse {
  Eigen::Vector3d center_axis = Eigen::Vector3d::Zero();
  Eigen::Matrix<double, 3, 2> tangent_basis =
      Eigen::Matrix<double, 3, 2>::Zero();
  Eigen::Matrix2d second_moment = Eigen::Matrix2d::Zero();
  double radius2 = 0.0;
  bool degenerate = false;  // rank-deficient moment matrix
  // Interval fallback when degenerate: per-tangent-coordinate quantiles.
  Eigen::Vector2d interval_halfwidth = Eigen::Vector2d::Zero();

  // Whether an axis lies inside the region (after sign alignment + log map).
  bool contains(const Eigen::Vector3d& axis) const;
};

struct PivotalEllipseReport {
  ProjStiefelPoint estimate;
  std::array<AxisEllipse, 3> axes;
  double level = 0.95;
  int b_requested = 0;
  int b_effective = 0;
  int failures = 0;
};

PivotalEllipseReport pivotal_confidence_ellipse(
    const std::vector<ProjStiefelPoint>& data, int b, double level,
    RngSeed seed, const std::optional<FrameEstimator>& estimator = {});

// Sphere log map of `axis` at `at` after sign alignment, expressed in
// `basis` coordinates; shared by the ellipse construction and its tests.
Eigen::Vector2d axis_log_coordinates(const Eigen::Vector3d& at,
                                     const Eigen::Matrix<double, 3, 2>& basis,
                                     const Eigen::Vector3d& axis);

// Deterministic orthonormal completion of a unit 3-vector to a 2-d tangent
// basis.
Eigen::Matrix<double, 3, 2> tangent_basis_at_axis(const Eigen::Vector3d& axis);

}  // namespace pfm
