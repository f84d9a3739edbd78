#include "pfm/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace pfm {

namespace {

// Index of the largest-magnitude entry, lowest index on ties.
int dominant_index(const Vector& v) {
  int best = 0;
  double mx = std::abs(v[0]);
  for (int i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > mx) {
      mx = std::abs(v[i]);
      best = i;
    }
  }
  return best;
}

int dominant_index(const CVector& v) {
  int best = 0;
  double mx = std::abs(v[0]);
  for (int i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > mx) {
      mx = std::abs(v[i]);
      best = i;
    }
  }
  return best;
}

double min_consecutive_gap(const Vector& sorted_desc) {
  if (sorted_desc.size() < 2) return std::numeric_limits<double>::infinity();
  double g = std::numeric_limits<double>::infinity();
  for (int i = 0; i + 1 < sorted_desc.size(); ++i)
    g = std::min(g, sorted_desc[i] - sorted_desc[i + 1]);
  return g;
}

}  // namespace

Svd svd(const Matrix& a, bool full_left) {
  detail::require(a.size() > 0, "svd: empty matrix");
  detail::require(detail::all_finite(a), "svd: non-finite entries");
  detail::require(a.rows() >= a.cols(), "svd: expected k >= r (tall matrix)");
  const int k = static_cast<int>(a.rows());
  const int r = static_cast<int>(a.cols());

  Svd out;
  if (full_left) {
    Eigen::JacobiSVD<Matrix> dec(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    out.singular_values = dec.singularValues();
    out.left_full = dec.matrixU();
    out.left = out.left_full.leftCols(r);
    out.right = dec.matrixV();
  } else {
    Eigen::JacobiSVD<Matrix> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.singular_values = dec.singularValues();
    out.left = dec.matrixU();
    out.right = dec.matrixV();
  }

  // Fix signs: dominant entry of each left singular vector positive.
  for (int j = 0; j < r; ++j) {
    const int i = dominant_index(Vector(out.left.col(j)));
    if (out.left(i, j) < 0.0) {
      out.left.col(j) = -out.left.col(j);
      out.right.col(j) = -out.right.col(j);
      if (full_left) out.left_full.col(j) = -out.left_full.col(j);
    }
  }
  if (full_left) {
    for (int j = r; j < k; ++j) {
      const int i = dominant_index(Vector(out.left_full.col(j)));
      if (out.left_full(i, j) < 0.0) out.left_full.col(j) = -out.left_full.col(j);
    }
    out.left = out.left_full.leftCols(r);
  }

  out.min_gap = min_consecutive_gap(out.singular_values);
  out.near_degenerate = out.min_gap < kSpectralGapTol;
  return out;
}

SymEig sym_eig(const Matrix& a) {
  detail::require(a.size() > 0 && a.rows() == a.cols(),
                  "sym_eig: need square matrix");
  detail::require(detail::all_finite(a), "sym_eig: non-finite entries");
  detail::require((a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-10,
                  "sym_eig: asymmetry exceeds 1e-10");
  const Matrix s = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> dec(s);
  detail::require(dec.info() == Eigen::Success, "sym_eig: solver failed");

  const int k = static_cast<int>(s.rows());
  SymEig out;
  out.eigenvalues = dec.eigenvalues().reverse();  // nonincreasing
  out.vectors = dec.eigenvectors().rowwise().reverse();
  for (int j = 0; j < k; ++j) {
    const int i = dominant_index(Vector(out.vectors.col(j)));
    if (out.vectors(i, j) < 0.0) out.vectors.col(j) = -out.vectors.col(j);
  }
  out.min_gap = min_consecutive_gap(out.eigenvalues);
  out.near_degenerate = out.min_gap < kSpectralGapTol;
  return out;
}

HermEig herm_eig(const CMatrix& a) {
  detail::require(a.size() > 0 && a.rows() == a.cols(),
                  "herm_eig: need square matrix");
  detail::require(detail::all_finite(a), "herm_eig: non-finite entries");
  detail::require((a - a.adjoint()).cwiseAbs().maxCoeff() <= 1e-10,
                  "herm_eig: deviation from A = A* exceeds 1e-10");
  const CMatrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> dec(h);
  detail::require(dec.info() == Eigen::Success, "herm_eig: solver failed");

  const int k = static_cast<int>(h.rows());
  HermEig out;
  out.eigenvalues = dec.eigenvalues().reverse();
  out.vectors = dec.eigenvectors().rowwise().reverse();
  for (int j = 0; j < k; ++j) {
    const int i = dominant_index(CVector(out.vectors.col(j)));
    const Complex z = out.vectors(i, j);
    const double m = std::abs(z);
    if (m > 0.0) out.vectors.col(j) *= std::conj(z) / m;
  }
  out.min_gap = min_consecutive_gap(out.eigenvalues);
  out.near_degenerate = out.min_gap < kSpectralGapTol;
  return out;
}

}  // namespace pfm
