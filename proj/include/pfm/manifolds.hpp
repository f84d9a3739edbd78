#pragma once

#include "pfm/median.hpp"
#include "pfm/spectral.hpp"
#include "pfm/types.hpp"

namespace pfm {

// Orthonormal k x r frame (X^t X = I_r).
struct StiefelPoint {
  Matrix x;
  int k() const { return static_cast<int>(x.rows()); }
  int r() const { return static_cast<int>(x.cols()); }
  double orthonormality_defect() const {
    return (x.transpose() * x - Matrix::Identity(r(), r())).norm();
  }
  bool valid(double tol = 1e-10) const {
    return detail::all_finite(x) && orthonormality_defect() <= tol;
  }
};

// Rank-r orthogonal projector (symmetric, idempotent), embedding of the
// r-dimensional-subspace manifold into the symmetric matrices.
struct GrassmannPoint {
  Matrix p;
  int r = 0;
  int k() const { return static_cast<int>(p.rows()); }
  bool valid(double tol = 1e-10) const;
  static GrassmannPoint from_basis(const Matrix& basis);
};

// Rank-one Hermitian projector z z^*, embedding of the complex projective
// space of unit vectors modulo phase.
struct CPPoint {
  CMatrix p;
  int k() const { return static_cast<int>(p.rows()); }
  bool valid(double tol = 1e-10) const;
  static CPPoint from_vector(const CVector& z);
  // Leading eigenvector with the deterministic phase convention.
  CVector representative() const;
};

// Nearest-point projections of ambient elements onto the manifolds.
// Stiefel: the polar factor of the thin SVD; unique iff the smallest singular
// value is positive. Grassmann: the projector onto the span of the top-r
// eigenvectors; needs an r-th eigengap. CP: the leading eigenprojector; needs
// a top gap.
StiefelPoint project_stiefel(const Matrix& a);
GrassmannPoint project_grassmann(const Matrix& a, int r);
CPPoint project_cp(const CMatrix& a);

template <typename PointT>
struct PfmResult {
  PointT point;
  MedianResult ambient;
};

// Projected Frobenius median: the Frobenius median of the embedded sample
// followed by the metric projection onto the manifold.
PfmResult<StiefelPoint> pfm(const std::vector<StiefelPoint>& data,
                            const SolverOptions& opts = {});
PfmResult<GrassmannPoint> pfm(const std::vector<GrassmannPoint>& data,
                              const SolverOptions& opts = {});
PfmResult<CPPoint> pfm(const std::vector<CPPoint>& data,
                       const SolverOptions& opts = {});

// Projection of the coordinatewise (extrinsic) mean; the non-robust
// comparison estimator.
StiefelPoint extrinsic_mean(const std::vector<StiefelPoint>& data);
GrassmannPoint extrinsic_mean(const std::vector<GrassmannPoint>& data);
CPPoint extrinsic_mean(const std::vector<CPPoint>& data);

// Chordal (embedded Frobenius) distances.
double extrinsic_distance(const StiefelPoint& a, const StiefelPoint& b);
double extrinsic_distance(const GrassmannPoint& a, const GrassmannPoint& b);
double extrinsic_distance(const CPPoint& a, const CPPoint& b);

// Angle between unit vectors modulo phase/sign: arccos(|<a, b>|), clamped.
double angular_error(const CVector& a, const CVector& b);
double angular_error(const Vector& a, const Vector& b);

}  // namespace pfm
