#include "pfm/vectorize.hpp"

namespace pfm {

namespace {
constexpr double kSqrt2 = 1.4142135623730950488;

void check_symmetric(const Matrix& a, const char* who) {
  detail::require(a.rows() == a.cols(), "vectorize: need square matrix");
  detail::require((a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-10, who);
}
}  // namespace

Vector vec(const Matrix& a) {
  detail::require(a.size() > 0, "vec: empty matrix");
  return Eigen::Map<const Vector>(a.data(), a.size());
}

Matrix vec_inverse(const Vector& v, int rows, int cols) {
  detail::require(v.size() == static_cast<Eigen::Index>(rows) * cols,
                  "vec_inverse: length mismatch");
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

Vector vech_sqrt2(const Matrix& a) {
  check_symmetric(a, "vech_sqrt2: asymmetry exceeds 1e-10");
  const int k = static_cast<int>(a.rows());
  Vector v(k * (k + 1) / 2);
  int t = 0;
  for (int j = 0; j < k; ++j)
    for (int i = j; i < k; ++i)
      v[t++] = (i == j) ? a(i, j) : kSqrt2 * 0.5 * (a(i, j) + a(j, i));
  return v;
}

Matrix vech_sqrt2_inverse(const Vector& v, int k) {
  detail::require(v.size() == static_cast<Eigen::Index>(k) * (k + 1) / 2,
                  "vech_sqrt2_inverse: length mismatch");
  Matrix a(k, k);
  int t = 0;
  for (int j = 0; j < k; ++j)
    for (int i = j; i < k; ++i) {
      const double x = (i == j) ? v[t] : v[t] / kSqrt2;
      a(i, j) = x;
      a(j, i) = x;
      ++t;
    }
  return a;
}

Vector vecl(const Matrix& a) {
  detail::require(a.rows() == a.cols(), "vecl: need square matrix");
  const int k = static_cast<int>(a.rows());
  Vector v(k * (k - 1) / 2);
  int t = 0;
  for (int j = 0; j < k; ++j)
    for (int i = j + 1; i < k; ++i) v[t++] = a(i, j);
  return v;
}

Matrix vecl_inverse_antisymmetric(const Vector& v, int k) {
  detail::require(v.size() == static_cast<Eigen::Index>(k) * (k - 1) / 2,
                  "vecl_inverse_antisymmetric: length mismatch");
  Matrix a = Matrix::Zero(k, k);
  int t = 0;
  for (int j = 0; j < k; ++j)
    for (int i = j + 1; i < k; ++i) {
      a(i, j) = v[t];
      a(j, i) = -v[t];
      ++t;
    }
  return a;
}

Vector vec_hermitian(const CMatrix& a) {
  detail::require(a.rows() == a.cols(), "vec_hermitian: need square matrix");
  detail::require((a - a.adjoint()).cwiseAbs().maxCoeff() <= 1e-10,
                  "vec_hermitian: deviation from A = A* exceeds 1e-10");
  const CMatrix h = 0.5 * (a + a.adjoint());
  const int k = static_cast<int>(h.rows());
  const Vector re = vech_sqrt2(h.real());
  const Vector im = vecl(h.imag());
  Vector v(k * k);
  v.head(re.size()) = re;
  v.tail(im.size()) = kSqrt2 * im;
  return v;
}

CMatrix vec_hermitian_inverse(const Vector& v, int k) {
  detail::require(v.size() == static_cast<Eigen::Index>(k) * k,
                  "vec_hermitian_inverse: length mismatch");
  const int nre = k * (k + 1) / 2;
  const Matrix re = vech_sqrt2_inverse(v.head(nre), k);
  const Matrix im =
      vecl_inverse_antisymmetric(Vector(v.tail(k * (k - 1) / 2) / kSqrt2), k);
  return re.cast<Complex>() + Complex(0.0, 1.0) * im.cast<Complex>();
}

DuplicationMatrices duplication_matrices(int k) {
  detail::require(k >= 1, "duplication_matrices: k >= 1");
  const int m = k * (k + 1) / 2;
  const int ml = k * (k - 1) / 2;
  DuplicationMatrices d;
  d.dup = Matrix::Zero(k * k, m);
  d.dup_tilde = Matrix::Zero(k * k, ml);
  d.g = Vector::Constant(m, kSqrt2);
  int t = 0, tl = 0;
  for (int j = 0; j < k; ++j) {
    d.dup(j * k + j, t) = 1.0;
    d.g[t] = 1.0;
    ++t;
    for (int i = j + 1; i < k; ++i) {
      d.dup(j * k + i, t) = 1.0;  // (i,j) entry
      d.dup(i * k + j, t) = 1.0;  // (j,i) entry
      ++t;
      d.dup_tilde(j * k + i, tl) = 1.0;
      d.dup_tilde(i * k + j, tl) = -1.0;
      ++tl;
    }
  }
  return d;
}

Vector vectorized(const AmbientMatrix& a) {
  switch (a.tag()) {
    case Structure::General:
      return vec(a.real());
    case Structure::Symmetric:
      return vech_sqrt2(a.real());
    case Structure::Hermitian:
      return vec_hermitian(a.cplx());
    case Structure::SymmetricTuple: {
      const int k = a.rows();
      const int block = k * (k + 1) / 2;
      Vector v(block * a.tuple_size());
      for (int j = 0; j < a.tuple_size(); ++j)
        v.segment(j * block, block) = vech_sqrt2(a.tuple()[j]);
      return v;
    }
  }
  throw InvalidInput("vectorized: unknown tag");
}

AmbientMatrix unvectorized(Structure tag, int rows, int cols, const Vector& v,
                           int tuple_size) {
  switch (tag) {
    case Structure::General:
      return AmbientMatrix::general(vec_inverse(v, rows, cols));
    case Structure::Symmetric:
      return AmbientMatrix::symmetric(vech_sqrt2_inverse(v, rows));
    case Structure::Hermitian:
      return AmbientMatrix::hermitian(vec_hermitian_inverse(v, rows));
    case Structure::SymmetricTuple: {
      const int block = rows * (rows + 1) / 2;
      detail::require(tuple_size >= 1 &&
                          v.size() == static_cast<Eigen::Index>(block) * tuple_size,
                      "unvectorized: tuple length mismatch");
      std::vector<Matrix> parts;
      parts.reserve(tuple_size);
      for (int j = 0; j < tuple_size; ++j)
        parts.push_back(vech_sqrt2_inverse(v.segment(j * block, block), rows));
      return AmbientMatrix::symmetric_tuple(std::move(parts));
    }
  }
  throw InvalidInput("unvectorized: unknown tag");
}

}  // namespace pfm
