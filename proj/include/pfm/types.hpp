#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace pfm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or out-of-contract inputs (shape mismatch, non-finite entries, ...).
struct InvalidInput : Error {
  using Error::Error;
};
// Spectral gap required by a projection is absent (tied leading values, zero rank).
struct DegenerateProjection : Error {
  using Error::Error;
};
// Rank-one tuple leaders fail to form a frame (linear dependence / missing gap).
struct DegenerateFrame : Error {
  using Error::Error;
};
// Matrix H of the asymptotic sandwich is numerically singular.
struct SingularH : Error {
  using Error::Error;
};
// A datum coincides with the evaluation point; 1/||residual|| is undefined.
struct AnchorResidual : Error {
  using Error::Error;
};
// Alignment target is orthogonal to the estimate; the phase is undefined.
struct AlignmentUndefined : Error {
  using Error::Error;
};
// Rejection sampler exceeded its attempt budget / chain failed to mix.
struct SamplerStalled : Error {
  using Error::Error;
};
// CSV / config parse failure; message carries line information.
struct ParseError : Error {
  using Error::Error;
};
// Eigenvalues required to be distinct coincide (frame extraction from a
// symmetric matrix with a repeated eigenvalue).
struct DegenerateSpectrum : Error {
  using Error::Error;
};

// Storage class of an ambient-space element. The median solver and the
// asymptotics only see the isometric vectorization, so the tag decides which
// vectorization applies.
enum class Structure { General, Symmetric, Hermitian, SymmetricTuple };

// An element of one of the ambient spaces: a general real k x r matrix, a
// real symmetric k x k matrix, a complex Hermitian k x k matrix, or an
// r-tuple of real symmetric k x k matrices. Symmetry / Hermitian-ness is
// validated on construction (tolerance 1e-10) and then enforced exactly.
class AmbientMatrix {
 public:
  // Empty placeholder (General, 0 x 0); result structs default to it.
  AmbientMatrix() = default;

  static AmbientMatrix general(Matrix m);
  static AmbientMatrix symmetric(Matrix m);
  static AmbientMatrix hermitian(CMatrix m);
  static AmbientMatrix symmetric_tuple(std::vector<Matrix> parts);

  Structure tag() const { return tag_; }
  // Row/column counts of a single component (all tuple parts share them).
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int tuple_size() const { return tuple_size_; }

  bool same_shape(const AmbientMatrix& other) const {
    return tag_ == other.tag_ && rows_ == other.rows_ &&
           cols_ == other.cols_ && tuple_size_ == other.tuple_size_;
  }

  const Matrix& real() const;
  const CMatrix& cplx() const;
  const std::vector<Matrix>& tuple() const;

  double frobenius_norm() const;
  AmbientMatrix minus(const AmbientMatrix& other) const;
  AmbientMatrix scaled(double s) const;

 private:
  Structure tag_ = Structure::General;
  int rows_ = 0, cols_ = 0, tuple_size_ = 0;
  std::variant<Matrix, CMatrix, std::vector<Matrix>> data_;
};

// Options shared by the iterative solvers.
struct SolverOptions {
  double tol = 1e-10;
  int max_iter = 10000;
  bool record_trace = false;  // keep per-iteration objective values
};

namespace detail {
void require(bool cond, const char* what);
bool all_finite(const Matrix& m);
bool all_finite(const CMatrix& m);
}  // namespace detail

}  // namespace pfm
