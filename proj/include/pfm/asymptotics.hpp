#pragma once

#include "pfm/manifolds.hpp"
#include "pfm/vectorize.hpp"

namespace pfm {

// Sandwich ingredients of the ambient median's first-order theory, in the
// structure-appropriate vectorization (dimension p):
//   H = E[ (I - u u^t) / ||residual|| ],  J = E[ u u^t ],
// with u the unit residual. J always has unit trace. Solves with H go
// through its eigendecomposition; when cond(H) > 1e12 a pseudo-inverse is
// used and flagged.
struct HJPair {
  Matrix h;
  Matrix j;
  double h_condition = 0.0;
  bool used_pseudoinverse = false;

  Vector apply_hinv(const Vector& v) const;
  Matrix sandwich() const;  // H^+ J H^+, the ambient CLT covariance

  Vector h_evals;  // ascending
  Matrix h_evecs;
};

HJPair empirical_hj(const std::vector<AmbientMatrix>& data,
                    const AmbientMatrix& a0);

// Ambient influence function of the Frobenius median at a probe z:
// unvec(H^+ v / ||v||) with v the vectorized residual z - a0. The probe must
// not coincide with a0 (residual norm > 1e-12).
AmbientMatrix influence_ambient(const AmbientMatrix& z, const AmbientMatrix& a0,
                                const HJPair& hj);

// Manifold influence functions: the ambient influence pushed through the
// derivative of the projection at a0. Outputs are tangent at the projected
// point (Stiefel: M0^t IF antisymmetric; Grassmann/CP: symmetric/Hermitian
// with range/corange structure).
Matrix influence_stiefel(const StiefelPoint& z, const Matrix& a0,
                         const HJPair& hj);
Matrix influence_grassmann(const GrassmannPoint& z, const Matrix& a0, int r,
                           const HJPair& hj);
CMatrix influence_cp(const CPPoint& z, const CMatrix& a0, const HJPair& hj);

// Index label of a tangent basis column. Stiefel: alpha=1 are the
// antisymmetric top-block directions (a < b <= r), alpha=2 the cross
// directions (a <= r < b). Grassmann: range/corange pairs a <= r < b.
// CP: pairs (1, b) with b >= 2; `phase` marks the imaginary companion in the
// real representation.
struct TangentLabel {
  int alpha = 0;
  int a = 0;  // 1-based
  int b = 0;  // 1-based
  bool phase = false;
};

// Orthonormal tangent bases at the projection of a0, in the coordinates of
// the ambient vectorization.
struct StiefelTangentBasis {
  Matrix columns;  // (k r) x p, p = k r - r(r+1)/2
  std::vector<TangentLabel> labels;
  Vector rho;  // singular values of a0 (zero-padded convention beyond r)
};
StiefelTangentBasis tangent_basis_stiefel(const Svd& dec, int k, int r);

struct GrassmannTangentBasis {
  Matrix columns;       // k^2 x p in vec coordinates, p = r(k-r)
  Matrix columns_vech;  // k(k+1)/2 x p in vech_sqrt2 coordinates (unit norm)
  std::vector<TangentLabel> labels;
  Vector lambda;
};
GrassmannTangentBasis tangent_basis_grassmann(const SymEig& dec, int r);

struct CpTangentBasis {
  CMatrix columns;      // k^2 x (k-1) complex vec coordinates
  Matrix columns_real;  // k^2 x 2(k-1) in vec_H coordinates (unit norm);
                        // first k-1 columns real parts, then phase companions
  std::vector<TangentLabel> labels;
  Vector lambda;
};
CpTangentBasis tangent_basis_cp(const HermEig& dec);

struct CovarianceEstimate {
  Matrix c;  // p x p PSD in the tangent coordinates
  Vector spectrum;
  bool rank_deficient = false;
  bool psd_floored = false;
};

// Limiting covariance of sqrt(n) * (tangent coordinates of the projected
// median). Stiefel follows the closed form with weights
// 2^{2-alpha} / (rho_a + rho_b) (rho zero beyond r); Grassmann and CP weight
// the unit tangent directions by the inverse spectral gaps, with the
// Hermitian case assembled in its real 2(k-1) representation.
CovarianceEstimate clt_covariance_stiefel(const HJPair& hj, const Svd& dec,
                                          int k, int r);
CovarianceEstimate clt_covariance_grassmann(const HJPair& hj, const SymEig& dec,
                                            int r);

struct CpCovarianceEstimate {
  CMatrix c;      // (k-1) x (k-1) Hermitian, complex coordinates
  Matrix c_real;  // 2(k-1) x 2(k-1), the coordinates of columns_real
  Vector spectrum;
  bool rank_deficient = false;
  bool psd_floored = false;
};
CpCovarianceEstimate clt_covariance_cp(const HJPair& hj, const HermEig& dec);

// Finite-increment Gateaux derivative of the ambient median toward a probe:
// (median under weights ((1-eps)/n, ..., eps) - median) / eps. The oracle the
// analytic influence functions are tested against.
AmbientMatrix gateaux_ambient(const std::vector<AmbientMatrix>& data,
                              const AmbientMatrix& probe, double eps,
                              const SolverOptions& opts = {});

}  // namespace pfm
