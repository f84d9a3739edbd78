#pragma once

#include "pfm/types.hpp"

namespace pfm {

// Gap threshold below which a spectrum is reported as near-degenerate.
inline constexpr double kSpectralGapTol = 1e-8;

// Thin SVD A = S diag(rho) T^t with nonincreasing rho >= 0. Sign convention:
// each left singular vector has its largest-magnitude entry positive (ties
// broken at the lowest index); the right vector flips with it. `left_full`
// is k x k when requested, first r columns are the singular vectors and the
// remainder a deterministic orthonormal completion.
struct Svd {
  Vector singular_values;
  Matrix left;       // k x r
  Matrix right;      // r x r
  Matrix left_full;  // k x k, only if requested
  double min_gap = 0.0;  // min over consecutive singular-value gaps
  bool near_degenerate = false;
};

Svd svd(const Matrix& a, bool full_left = false);

// Symmetric eigendecomposition with nonincreasing eigenvalues and the same
// largest-entry-positive sign convention on eigenvectors. Input is checked
// against A = A^t (tolerance 1e-10) and symmetrized before decomposing.
struct SymEig {
  Vector eigenvalues;
  Matrix vectors;
  double min_gap = 0.0;
  bool near_degenerate = false;
};

SymEig sym_eig(const Matrix& a);

// Hermitian eigendecomposition, nonincreasing eigenvalues. Phase convention:
// each eigenvector's largest-magnitude entry is rotated to be real positive
// (ties broken at the lowest index).
struct HermEig {
  Vector eigenvalues;
  CMatrix vectors;
  double min_gap = 0.0;
  bool near_degenerate = false;
};

HermEig herm_eig(const CMatrix& a);

}  // namespace pfm
