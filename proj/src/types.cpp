#include "pfm/types.hpp"

namespace pfm {

namespace detail {

void require(bool cond, const char* what) {
  if (!cond) throw InvalidInput(what);
}

bool all_finite(const Matrix& m) { return m.allFinite(); }
bool all_finite(const CMatrix& m) {
  return m.real().allFinite() && m.imag().allFinite();
}

}  // namespace detail

AmbientMatrix AmbientMatrix::general(Matrix m) {
  detail::require(m.size() > 0, "general: empty matrix");
  detail::require(detail::all_finite(m), "general: non-finite entries");
  AmbientMatrix a;
  a.tag_ = Structure::General;
  a.rows_ = static_cast<int>(m.rows());
  a.cols_ = static_cast<int>(m.cols());
  a.data_ = std::move(m);
  return a;
}

AmbientMatrix AmbientMatrix::symmetric(Matrix m) {
  detail::require(m.size() > 0 && m.rows() == m.cols(),
                  "symmetric: need square matrix");
  detail::require(detail::all_finite(m), "symmetric: non-finite entries");
  detail::require((m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-10,
                  "symmetric: asymmetry exceeds 1e-10");
  Matrix s = 0.5 * (m + m.transpose());
  AmbientMatrix a;
  a.tag_ = Structure::Symmetric;
  a.rows_ = a.cols_ = static_cast<int>(s.rows());
  a.data_ = std::move(s);
  return a;
}

AmbientMatrix AmbientMatrix::hermitian(CMatrix m) {
  detail::require(m.size() > 0 && m.rows() == m.cols(),
                  "hermitian: need square matrix");
  detail::require(detail::all_finite(m), "hermitian: non-finite entries");
  detail::require((m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-10,
                  "hermitian: deviation from A = A* exceeds 1e-10");
  CMatrix h = 0.5 * (m + m.adjoint());
  AmbientMatrix a;
  a.tag_ = Structure::Hermitian;
  a.rows_ = a.cols_ = static_cast<int>(h.rows());
  a.data_ = std::move(h);
  return a;
}

AmbientMatrix AmbientMatrix::symmetric_tuple(std::vector<Matrix> parts) {
  detail::require(!parts.empty(), "symmetric_tuple: empty tuple");
  const int k = static_cast<int>(parts.front().rows());
  for (Matrix& p : parts) {
    detail::require(p.rows() == k && p.cols() == k,
                    "symmetric_tuple: components must be square, same size");
    detail::require(detail::all_finite(p),
                    "symmetric_tuple: non-finite entries");
    detail::require((p - p.transpose()).cwiseAbs().maxCoeff() <= 1e-10,
                    "symmetric_tuple: asymmetry exceeds 1e-10");
    p = 0.5 * (p + p.transpose()).eval();
  }
  AmbientMatrix a;
  a.tag_ = Structure::SymmetricTuple;
  a.rows_ = a.cols_ = k;
  a.tuple_size_ = static_cast<int>(parts.size());
  a.data_ = std::move(parts);
  return a;
}

const Matrix& AmbientMatrix::real() const {
  detail::require(
      tag_ == Structure::General || tag_ == Structure::Symmetric,
      "AmbientMatrix: not a real matrix");
  return std::get<Matrix>(data_);
}

const CMatrix& AmbientMatrix::cplx() const {
  detail::require(tag_ == Structure::Hermitian,
                  "AmbientMatrix: not a Hermitian matrix");
  return std::get<CMatrix>(data_);
}

const std::vector<Matrix>& AmbientMatrix::tuple() const {
  detail::require(tag_ == Structure::SymmetricTuple,
                  "AmbientMatrix: not a tuple");
  return std::get<std::vector<Matrix>>(data_);
}

double AmbientMatrix::frobenius_norm() const {
  switch (tag_) {
    case Structure::General:
    case Structure::Symmetric:
      return std::get<Matrix>(data_).norm();
    case Structure::Hermitian:
      return std::get<CMatrix>(data_).norm();
    case Structure::SymmetricTuple: {
      double s = 0.0;
      for (const Matrix& p : std::get<std::vector<Matrix>>(data_))
        s += p.squaredNorm();
      return std::sqrt(s);
    }
  }
  return 0.0;
}

AmbientMatrix AmbientMatrix::minus(const AmbientMatrix& other) const {
  detail::require(same_shape(other), "minus: shape/tag mismatch");
  AmbientMatrix a = *this;
  switch (tag_) {
    case Structure::General:
    case Structure::Symmetric:
      a.data_ = Matrix(std::get<Matrix>(data_) - std::get<Matrix>(other.data_));
      break;
    case Structure::Hermitian:
      a.data_ =
          CMatrix(std::get<CMatrix>(data_) - std::get<CMatrix>(other.data_));
      break;
    case Structure::SymmetricTuple: {
      std::vector<Matrix> parts = std::get<std::vector<Matrix>>(data_);
      const auto& o = std::get<std::vector<Matrix>>(other.data_);
      for (std::size_t i = 0; i < parts.size(); ++i) parts[i] -= o[i];
      a.data_ = std::move(parts);
      break;
    }
  }
  return a;
}

AmbientMatrix AmbientMatrix::scaled(double s) const {
  AmbientMatrix a = *this;
  switch (tag_) {
    case Structure::General:
    case Structure::Symmetric:
      a.data_ = Matrix(s * std::get<Matrix>(data_));
      break;
    case Structure::Hermitian:
      a.data_ = CMatrix(s * std::get<CMatrix>(data_));
      break;
    case Structure::SymmetricTuple: {
      std::vector<Matrix> parts = std::get<std::vector<Matrix>>(data_);
      for (Matrix& p : parts) p *= s;
      a.data_ = std::move(parts);
      break;
    }
  }
  return a;
}

}  // namespace pfm
