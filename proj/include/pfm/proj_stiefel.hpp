#pragma once

#include "pfm/manifolds.hpp"

namespace pfm {

// Orthonormal frame with per-column sign ambiguity: the quotient of the
// Stiefel manifold by diagonal sign matrices. `x` stores the canonical
// representative: each column's largest-magnitude entry is positive (ties
// broken at the lowest index).
struct ProjStiefelPoint {
  Matrix x;
  int k() const { return static_cast<int>(x.rows()); }
  int r() const { return static_cast<int>(x.cols()); }
  static ProjStiefelPoint canonical(Matrix frame);
  bool valid(double tol = 1e-10) const;
  // Quotient chordal distance: min over sign flips of ||a - b diag(eps)||_F.
  double quotient_distance(const ProjStiefelPoint& other) const;
};

// Element of the embedding space: the r-tuple of symmetric rank-one images
// (x_1 x_1^t, ..., x_r x_r^t).
struct AxialTuple {
  std::vector<Matrix> components;
  int k() const {
    return components.empty() ? 0 : static_cast<int>(components[0].rows());
  }
  int r() const { return static_cast<int>(components.size()); }
};

AxialTuple embed_frame(const ProjStiefelPoint& p);

// Componentwise nearest rank-one tuple: per component the leading
// eigenprojector (needs a leading eigengap per component); the r leading
// eigenvectors must additionally be linearly independent so that a frame can
// be recovered downstream.
AxialTuple project_to_rank1_tuple(const AxialTuple& b);

// Frame projection of a square matrix of tuple leaders with a sign twist:
// with Q = S diag(rho) T^t the thin SVD, returns sum_j s_j (eps .* t_j)^t,
// which equals the polar factor of Q diag(eps).
StiefelPoint project_frame(const Matrix& q, const std::vector<int>& eps);

struct ProjStiefelPfmResult {
  ProjStiefelPoint point;             // canonical representative
  std::vector<StiefelPoint> coset;    // all 2^r sign-twisted frames
  MedianResult ambient;               // tuple-median diagnostics
};

// Projected Frobenius median on the axial-frame manifold: tuple median in the
// embedding space, componentwise rank-one projection, then frame recovery
// from the leaders (full coset plus canonical representative).
ProjStiefelPfmResult pfm_proj_stiefel(const std::vector<ProjStiefelPoint>& data,
                                      const SolverOptions& opts = {});

// Per-axis angles arccos(|<est_j, truth_j>|), axes paired by index.
Vector frame_angular_errors(const ProjStiefelPoint& est,
                            const ProjStiefelPoint& truth);

}  // namespace pfm
