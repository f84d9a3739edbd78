#pragma once

#include "pfm/types.hpp"

namespace pfm {

// Norm-preserving vectorizations. Each maps its matrix class into a real
// Euclidean space with ||A||_F = ||v||_2, so the spatial median of the
// vectorized sample is exactly the Frobenius median of the matrices.

// Column-stacking of a general real k x r matrix (length kr).
Vector vec(const Matrix& a);
Matrix vec_inverse(const Vector& v, int rows, int cols);

// Lower triangle of a symmetric k x k matrix in column-major order, diagonal
// entries kept, off-diagonal entries scaled by sqrt(2) (length k(k+1)/2).
// For k=3: (a11, sqrt2 a21, sqrt2 a31, a22, sqrt2 a32, a33).
Vector vech_sqrt2(const Matrix& a);
Matrix vech_sqrt2_inverse(const Vector& v, int k);

// Strictly-lower triangle, column-major, unscaled (length k(k-1)/2).
Vector vecl(const Matrix& a);
// Rebuilds the antisymmetric matrix with the given strict lower triangle.
Matrix vecl_inverse_antisymmetric(const Vector& v, int k);

// Hermitian k x k matrix -> (vech_sqrt2(Re A), sqrt(2) * vecl(Im A)),
// length k^2. Isometric because Re A is symmetric and Im A antisymmetric.
Vector vec_hermitian(const CMatrix& a);
CMatrix vec_hermitian_inverse(const Vector& v, int k);

// Duplication-style helpers for the covariance assembly:
//   dup:       k^2 x k(k+1)/2 with dup * vech(A) = vec(A), A symmetric
//              (plain vech, no sqrt(2) weights),
//   dup_tilde: k^2 x k(k-1)/2 with dup_tilde * vecl(V) = vec(V), V antisym,
//   g:         diagonal k(k+1)/2 weights, 1 at diagonal-element positions of
//              the vech ordering and sqrt(2) elsewhere, so g * vech = vech_sqrt2.
struct DuplicationMatrices {
  Matrix dup;
  Matrix dup_tilde;
  Vector g;  // diagonal of G_k
};

DuplicationMatrices duplication_matrices(int k);

// Structure-dispatching isometry for ambient elements; tuples concatenate the
// per-component vech_sqrt2 blocks.
Vector vectorized(const AmbientMatrix& a);
AmbientMatrix unvectorized(Structure tag, int rows, int cols, const Vector& v,
                           int tuple_size = 0);

}  // namespace pfm
