#include "pfm/bootstrap.hpp"

#include "pfm/asymptotics.hpp"
#include "pfm/manifolds.hpp"
#include "pfm/vectorize.hpp"

#include <algorithm>

namespace pfm {

namespace {

std::vector<int> resample_indices(int n, Pcg64& rng) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = rng.uniform_int(n);
  return idx;
}

double sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

// Calibration quantile with the (B+1) order-statistic convention
// (ceil((B+1) * level)-th smallest, capped at the maximum): the standard
// choice for bootstrap critical values, slightly wider in the tail than the
// type-1 empirical quantile.
double quantile(std::vector<double> v, double level) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const long rank = static_cast<long>(
      std::ceil(level * (static_cast<double>(v.size()) + 1.0)));
  const std::size_t i = static_cast<std::size_t>(
      std::clamp<long>(rank - 1, 0, static_cast<long>(v.size()) - 1));
  return v[i];
}

ProjStiefelPoint default_frame_estimator(
    const std::vector<ProjStiefelPoint>& data) {
  return pfm_proj_stiefel(data).point;
}

// --- studentization machinery for the default (median) estimator ----------

std::vector<AmbientMatrix> tuple_embeddings(
    const std::vector<ProjStiefelPoint>& data) {
  std::vector<AmbientMatrix> out;
  out.reserve(data.size());
  for (const ProjStiefelPoint& p : data)
    out.push_back(AmbientMatrix::symmetric_tuple(embed_frame(p).components));
  return out;
}

// Axes of the projected tuple: leading eigenvector per component, made
// orthonormal by the polar factor. Column signs are immaterial downstream
// (the log map sign-aligns).
Matrix axes_of_tuple(const AmbientMatrix& t) {
  const std::vector<Matrix>& parts = t.tuple();
  const int r = static_cast<int>(parts.size());
  Matrix q(parts[0].rows(), r);
  for (int j = 0; j < r; ++j) {
    const Eigen::SelfAdjointEigenSolver<Matrix> dec(parts[static_cast<std::size_t>(j)]);
    q.col(j) = dec.eigenvectors().col(dec.eigenvectors().cols() - 1);
  }
  return project_stiefel(q).x;
}

struct AxisCovariances {
  std::array<Eigen::Matrix2d, 3> v;
  bool ok = false;
};

// Per-axis 2x2 covariance estimate of the projected-median axes for the
// sample with tuple embeddings `amb` and ambient median `center`: the
// sandwich H^+ J H^+ / n pushed through a central difference of the
// projection-to-axes map, expressed in the fixed chart (axes + bases).
AxisCovariances axis_sandwich(
    const std::vector<AmbientMatrix>& amb, const AmbientMatrix& center,
    const Matrix& chart_axes,
    const std::array<Eigen::Matrix<double, 3, 2>, 3>& bases) {
  AxisCovariances out;
  const Vector v0 = vectorized(center);
  // Atoms sitting on the median carry subgradient mass; the smooth H/J sums
  // are taken over the remaining points.
  std::vector<AmbientMatrix> interior;
  interior.reserve(amb.size());
  const double coincide = 1e-9 * std::max(1.0, v0.norm());
  for (const AmbientMatrix& x : amb)
    if ((vectorized(x) - v0).norm() > coincide) interior.push_back(x);
  if (interior.size() < 8) return out;

  Matrix sigma;
  try {
    sigma = empirical_hj(interior, center).sandwich();
  } catch (const Error&) {
    return out;
  }

  const int p = static_cast<int>(v0.size());
  Matrix g(6, p);
  const double h = 1e-5 * std::max(1.0, v0.norm());
  for (int c = 0; c < p; ++c) {
    Vector vp = v0, vm = v0;
    vp[c] += h;
    vm[c] -= h;
    Matrix ap, am;
    try {
      ap = axes_of_tuple(unvectorized(center.tag(), center.rows(),
                                      center.cols(), vp, center.tuple_size()));
      am = axes_of_tuple(unvectorized(center.tag(), center.rows(),
                                      center.cols(), vm, center.tuple_size()));
    } catch (const Error&) {
      return out;
    }
    for (int j = 0; j < 3; ++j) {
      const Eigen::Vector2d yp = axis_log_coordinates(
          chart_axes.col(j), bases[static_cast<std::size_t>(j)], ap.col(j));
      const Eigen::Vector2d ym = axis_log_coordinates(
          chart_axes.col(j), bases[static_cast<std::size_t>(j)], am.col(j));
      g.block<2, 1>(2 * j, c) = (yp - ym) / (2.0 * h);
    }
  }

  const Matrix big =
      g * sigma * g.transpose() / static_cast<double>(amb.size());
  for (int j = 0; j < 3; ++j) out.v[static_cast<std::size_t>(j)] = big.block<2, 2>(2 * j, 2 * j);
  out.ok = true;
  return out;
}

// Positive-definite inverse with an explicit gate; returns false when the
// 2x2 covariance is numerically rank deficient.
bool invert_spd2(const Eigen::Matrix2d& m, Eigen::Matrix2d& inv) {
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> dec(m);
  if (dec.eigenvalues()[0] <=
      1e-12 * std::max(dec.eigenvalues()[1], 1e-300))
    return false;
  inv = m.inverse();
  return true;
}

}  // namespace

BootstrapFrameReport bootstrap_frames(const std::vector<ProjStiefelPoint>& data,
                                      const FrameEstimator& estimator, int b,
                                      RngSeed seed) {
  detail::require(!data.empty(), "bootstrap_frames: empty data");
  detail::require(b >= 1, "bootstrap_frames: need B >= 1");
  const int n = static_cast<int>(data.size());

  BootstrapFrameReport rep;
  rep.b_requested = b;
  rep.estimate = estimator(data);

  std::array<std::vector<double>, 3> angles;
  for (auto& a : angles) a.reserve(static_cast<std::size_t>(b));

  Pcg64 rng = seed.engine();
  std::vector<ProjStiefelPoint> resample;
  resample.reserve(static_cast<std::size_t>(n));
  for (int rep_i = 0; rep_i < b; ++rep_i) {
    const std::vector<int> idx = resample_indices(n, rng);
    resample.clear();
    for (int i : idx) resample.push_back(data[static_cast<std::size_t>(i)]);
    try {
      const ProjStiefelPoint est_b = estimator(resample);
      const Vector errs = frame_angular_errors(est_b, rep.estimate);
      for (int j = 0; j < 3; ++j) angles[static_cast<std::size_t>(j)].push_back(errs[j]);
      ++rep.b_effective;
    } catch (const Error&) {
      ++rep.failures;
    }
  }
  for (int j = 0; j < 3; ++j)
    rep.per_axis_se[j] = sd(angles[static_cast<std::size_t>(j)]);
  return rep;
}

BootstrapShapeReport bootstrap_shapes(const std::vector<CVector>& data,
                                      const ShapeEstimator& estimator, int b,
                                      RngSeed seed) {
  detail::require(!data.empty(), "bootstrap_shapes: empty data");
  detail::require(b >= 1, "bootstrap_shapes: need B >= 1");
  const int n = static_cast<int>(data.size());

  BootstrapShapeReport rep;
  rep.b_requested = b;
  rep.estimate = estimator(data);

  std::vector<double> angles;
  angles.reserve(static_cast<std::size_t>(b));
  Pcg64 rng = seed.engine();
  std::vector<CVector> resample;
  resample.reserve(static_cast<std::size_t>(n));
  for (int rep_i = 0; rep_i < b; ++rep_i) {
    const std::vector<int> idx = resample_indices(n, rng);
    resample.clear();
    for (int i : idx) resample.push_back(data[static_cast<std::size_t>(i)]);
    try {
      angles.push_back(angular_error(estimator(resample), rep.estimate));
      ++rep.b_effective;
    } catch (const Error&) {
      ++rep.failures;
    }
  }
  rep.se = sd(angles);
  return rep;
}

Eigen::Matrix<double, 3, 2> tangent_basis_at_axis(const Eigen::Vector3d& axis) {
  const Eigen::Vector3d m = axis / axis.norm();
  // Pick the coordinate axis least aligned with m, then Gram-Schmidt.
  int least = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(m[i]) < std::abs(m[least])) least = i;
  Eigen::Vector3d e = Eigen::Vector3d::Zero();
  e[least] = 1.0;
  Eigen::Matrix<double, 3, 2> basis;
  basis.col(0) = (e - m * m.dot(e)).normalized();
  basis.col(1) = m.cross(basis.col(0));
  return basis;
}

Eigen::Vector2d axis_log_coordinates(const Eigen::Vector3d& at,
                                     const Eigen::Matrix<double, 3, 2>& basis,
                                     const Eigen::Vector3d& axis) {
  Eigen::Vector3d x = axis / axis.norm();
  if (at.dot(x) < 0.0) x = -x;  // axial sign alignment
  const double c = std::min(1.0, std::max(-1.0, at.dot(x)));
  const double theta = std::acos(c);
  Eigen::Vector3d perp = x - c * at;
  const double pn = perp.norm();
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  if (pn > 1e-15) v = (theta / pn) * perp;
  return basis.transpose() * v;
}

bool AxisEllipse::contains(const Eigen::Vector3d& axis) const {
  const Eigen::Vector2d y =
      axis_log_coordinates(center_axis, tangent_basis, axis);
  if (degenerate)
    return std::abs(y[0]) <= interval_halfwidth[0] &&
           std::abs(y[1]) <= interval_halfwidth[1];
  return y.dot(second_moment.inverse() * y) <= radius2;
}

PivotalEllipseReport pivotal_confidence_ellipse(
    const std::vector<ProjStiefelPoint>& data, int b, double level,
    RngSeed seed, const std::optional<FrameEstimator>& estimator) {
  detail::require(level > 0.0 && level < 1.0,
                  "pivotal_confidence_ellipse: level in (0,1)");
  const FrameEstimator est = estimator.value_or(default_frame_estimator);

  PivotalEllipseReport rep;
  rep.level = level;
  rep.b_requested = b;

  // Studentization applies to the built-in median estimator, whose ambient
  // first-order theory supplies per-sample covariance estimates. With a
  // custom estimator the radius falls back to moment calibration.
  std::optional<ProjStiefelPfmResult> full_fit;
  if (!estimator.has_value()) {
    full_fit = pfm_proj_stiefel(data);
    rep.estimate = full_fit->point;
  } else {
    rep.estimate = est(data);
  }

  std::array<Eigen::Matrix<double, 3, 2>, 3> bases;
  for (int j = 0; j < 3; ++j) {
    bases[static_cast<std::size_t>(j)] =
        tangent_basis_at_axis(rep.estimate.x.col(j));
    rep.axes[static_cast<std::size_t>(j)].center_axis = rep.estimate.x.col(j);
    rep.axes[static_cast<std::size_t>(j)].tangent_basis =
        bases[static_cast<std::size_t>(j)];
  }

  AxisCovariances v_full;
  std::array<Eigen::Matrix2d, 3> v_full_inv;
  bool studentize = full_fit.has_value();
  if (studentize) {
    v_full = axis_sandwich(tuple_embeddings(data), full_fit->ambient.median,
                           rep.estimate.x, bases);
    studentize = v_full.ok;
    for (int j = 0; studentize && j < 3; ++j)
      studentize = invert_spd2(v_full.v[static_cast<std::size_t>(j)],
                               v_full_inv[static_cast<std::size_t>(j)]);
  }

  std::array<std::vector<Eigen::Vector2d>, 3> coords;
  std::array<std::vector<double>, 3> tstats;
  Pcg64 rng = seed.engine();
  const int n = static_cast<int>(data.size());
  std::vector<ProjStiefelPoint> resample;
  resample.reserve(static_cast<std::size_t>(n));
  for (int rep_i = 0; rep_i < b; ++rep_i) {
    const std::vector<int> idx = resample_indices(n, rng);
    resample.clear();
    for (int i : idx) resample.push_back(data[static_cast<std::size_t>(i)]);
    try {
      if (studentize) {
        const ProjStiefelPfmResult fit_b = pfm_proj_stiefel(resample);
        const AxisCovariances v_b =
            axis_sandwich(tuple_embeddings(resample), fit_b.ambient.median,
                          rep.estimate.x, bases);
        for (int j = 0; j < 3; ++j) {
          auto& ax = rep.axes[static_cast<std::size_t>(j)];
          const Eigen::Vector2d u = axis_log_coordinates(
              ax.center_axis, ax.tangent_basis, fit_b.point.x.col(j));
          // Resamples whose own covariance is unavailable (e.g. the median
          // stuck on a heavy atom) are studentized by the full-sample one.
          Eigen::Matrix2d inv = v_full_inv[static_cast<std::size_t>(j)];
          if (v_b.ok) {
            Eigen::Matrix2d own;
            if (invert_spd2(v_b.v[static_cast<std::size_t>(j)], own))
              inv = own;
          }
          coords[static_cast<std::size_t>(j)].push_back(u);
          tstats[static_cast<std::size_t>(j)].push_back(u.dot(inv * u));
        }
      } else {
        const ProjStiefelPoint est_b = est(resample);
        for (int j = 0; j < 3; ++j) {
          auto& ax = rep.axes[static_cast<std::size_t>(j)];
          coords[static_cast<std::size_t>(j)].push_back(axis_log_coordinates(
              ax.center_axis, ax.tangent_basis, est_b.x.col(j)));
        }
      }
      ++rep.b_effective;
    } catch (const Error&) {
      ++rep.failures;
    }
  }
  detail::require(rep.b_effective >= 8,
                  "pivotal_confidence_ellipse: too few successful resamples");

  for (int j = 0; j < 3; ++j) {
    auto& ax = rep.axes[static_cast<std::size_t>(j)];
    if (studentize) {
      ax.second_moment = v_full.v[static_cast<std::size_t>(j)];
      ax.radius2 = quantile(tstats[static_cast<std::size_t>(j)], level);
      continue;
    }
    const auto& pts = coords[static_cast<std::size_t>(j)];
    Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
    for (const auto& y : pts) m += y * y.transpose();
    m /= static_cast<double>(pts.size());
    ax.second_moment = m;

    Eigen::Matrix2d minv;
    if (!invert_spd2(m, minv)) {
      ax.degenerate = true;
      std::vector<double> a0, a1;
      a0.reserve(pts.size());
      a1.reserve(pts.size());
      for (const auto& y : pts) {
        a0.push_back(std::abs(y[0]));
        a1.push_back(std::abs(y[1]));
      }
      ax.interval_halfwidth[0] = quantile(a0, level);
      ax.interval_halfwidth[1] = quantile(a1, level);
      continue;
    }
    std::vector<double> mahal;
    mahal.reserve(pts.size());
    for (const auto& y : pts) mahal.push_back(y.dot(minv * y));
    ax.radius2 = quantile(mahal, level);
  }
  return rep;
}

}  // namespace pfm
