#include "pfm/asymptotics.hpp"

#include "pfm/median.hpp"

namespace pfm {

namespace {
constexpr double kAnchorTol = 1e-12;
constexpr double kCondWarn = 1e12;
constexpr double kGapTol = 1e-10;

// Floors tiny negative eigenvalues introduced by roundoff.
void floor_psd(Matrix& c, bool& floored, bool& rank_deficient) {
  c = 0.5 * (c + c.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> dec(c);
  Vector ev = dec.eigenvalues();
  const double top = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  floored = false;
  for (int i = 0; i < ev.size(); ++i) {
    if (ev[i] < 0.0) {
      floored = floored || ev[i] < -1e-12 * top;
      ev[i] = 0.0;
    }
  }
  rank_deficient = (ev.array() <= 1e-12 * top).any();
  if (floored || (ev.array() == 0.0).any())
    c = dec.eigenvectors() * ev.asDiagonal() * dec.eigenvectors().transpose();
}

}  // namespace

Vector HJPair::apply_hinv(const Vector& v) const {
  Vector y = h_evecs.transpose() * v;
  const double top = h_evals[h_evals.size() - 1];
  for (int i = 0; i < y.size(); ++i) {
    if (h_evals[i] > 1e-14 * top)
      y[i] /= h_evals[i];
    else
      y[i] = 0.0;  // pseudo-inverse branch
  }
  return h_evecs * y;
}

Matrix HJPair::sandwich() const {
  Matrix hij(h.rows(), h.cols());
  for (int c = 0; c < j.cols(); ++c) hij.col(c) = apply_hinv(j.col(c));
  Matrix v(h.rows(), h.cols());
  for (int r = 0; r < hij.rows(); ++r)
    v.row(r) = apply_hinv(hij.row(r).transpose()).transpose();
  return 0.5 * (v + v.transpose());
}

HJPair empirical_hj(const std::vector<AmbientMatrix>& data,
                    const AmbientMatrix& a0) {
  detail::require(!data.empty(), "empirical_hj: empty data");
  const Vector v0 = vectorized(a0);
  const int p = static_cast<int>(v0.size());

  HJPair out;
  out.h = Matrix::Zero(p, p);
  out.j = Matrix::Zero(p, p);
  const double wi = 1.0 / static_cast<double>(data.size());
  for (const AmbientMatrix& x : data) {
    detail::require(x.same_shape(a0), "empirical_hj: shape mismatch");
    const Vector v = vectorized(x) - v0;
    const double d = v.norm();
    if (d <= kAnchorTol)
      throw AnchorResidual(
          "empirical_hj: a datum coincides with the center; drop or jitter it");
    const Vector u = v / d;
    out.j.noalias() += wi * (u * u.transpose());
    out.h.noalias() += (wi / d) * (Matrix::Identity(p, p) - u * u.transpose());
  }

  Eigen::SelfAdjointEigenSolver<Matrix> dec(out.h);
  out.h_evals = dec.eigenvalues();
  out.h_evecs = dec.eigenvectors();
  const double top = out.h_evals[p - 1];
  const double bottom = out.h_evals[0];
  if (top <= 0.0) throw SingularH("empirical_hj: H has no positive spectrum");
  out.h_condition =
      bottom > 0.0 ? top / bottom : std::numeric_limits<double>::infinity();
  out.used_pseudoinverse = out.h_condition > kCondWarn;
  return out;
}

AmbientMatrix influence_ambient(const AmbientMatrix& z, const AmbientMatrix& a0,
                                const HJPair& hj) {
  const Vector v = vectorized(z) - vectorized(a0);
  const double d = v.norm();
  if (d <= kAnchorTol)
    throw AnchorResidual("influence_ambient: probe coincides with the median");
  const Vector dir = hj.apply_hinv(v / d);
  return unvectorized(a0.tag(), a0.rows(), a0.cols(), dir, a0.tuple_size());
}

Matrix influence_stiefel(const StiefelPoint& z, const Matrix& a0,
                         const HJPair& hj) {
  const int k = static_cast<int>(a0.rows());
  const int r = static_cast<int>(a0.cols());
  const Svd dec = svd(a0, /*full_left=*/true);
  if (dec.singular_values[r - 1] <= kGapTol)
    throw DegenerateProjection("influence_stiefel: rank-deficient center");

  const Matrix ifa =
      influence_ambient(AmbientMatrix::general(z.x), AmbientMatrix::general(a0),
                        hj)
          .real();
  const Matrix& s = dec.left_full;
  const Matrix& t = dec.right;
  const Vector& rho = dec.singular_values;

  Matrix m = Matrix::Zero(k, r);
  // Rotations inside the frame's column space.
  for (int a = 0; a < r; ++a)
    for (int b = a + 1; b < r; ++b) {
      const double num = s.col(a).dot(ifa * t.col(b)) -
                         s.col(b).dot(ifa * t.col(a));
      m.noalias() += (num / (rho[a] + rho[b])) *
                     (s.col(a) * t.col(b).transpose() -
                      s.col(b) * t.col(a).transpose());
    }
  // Motion of the column space itself (absent when k == r); the weight is the
  // surviving singular value of the pair, matching the zero-padded spectrum
  // convention of the covariance.
  for (int a = 0; a < r; ++a)
    for (int jj = r; jj < k; ++jj) {
      const double num = s.col(jj).dot(ifa * t.col(a));
      m.noalias() += (num / rho[a]) * (s.col(jj) * t.col(a).transpose());
    }
  return m;
}

Matrix influence_grassmann(const GrassmannPoint& z, const Matrix& a0, int r,
                           const HJPair& hj) {
  const SymEig dec = sym_eig(a0);
  const int k = static_cast<int>(a0.rows());
  detail::require(r >= 1 && r < k, "influence_grassmann: need 1 <= r < k");
  if (dec.eigenvalues[r - 1] - dec.eigenvalues[r] <= kGapTol)
    throw DegenerateProjection("influence_grassmann: eigengap at r too small");

  const Matrix ifa = influence_ambient(AmbientMatrix::symmetric(z.p),
                                       AmbientMatrix::symmetric(a0), hj)
                         .real();
  const Matrix& q = dec.vectors;
  const Vector& lam = dec.eigenvalues;

  Matrix m = Matrix::Zero(k, k);
  for (int a = 0; a < r; ++a)
    for (int b = r; b < k; ++b) {
      const double num = q.col(a).dot(ifa * q.col(b));
      m.noalias() += (num / (lam[a] - lam[b])) *
                     (q.col(a) * q.col(b).transpose() +
                      q.col(b) * q.col(a).transpose());
    }
  return m;
}

CMatrix influence_cp(const CPPoint& z, const CMatrix& a0, const HJPair& hj) {
  const HermEig dec = herm_eig(a0);
  const int k = static_cast<int>(a0.rows());
  if (dec.eigenvalues[0] - dec.eigenvalues[1] <= kGapTol)
    throw DegenerateProjection("influence_cp: leading eigengap too small");

  const CMatrix ifa = influence_ambient(AmbientMatrix::hermitian(z.p),
                                        AmbientMatrix::hermitian(a0), hj)
                          .cplx();
  const CMatrix& u = dec.vectors;
  const Vector& lam = dec.eigenvalues;

  CMatrix m = CMatrix::Zero(k, k);
  for (int b = 1; b < k; ++b) {
    // c_b = u_1^* IF_A u_b; the Hermitian eigenprojector perturbation pairs
    // it with its conjugate so the output stays Hermitian.
    const Complex cb = u.col(0).dot(ifa * u.col(b));
    const Complex w = cb / (lam[0] - lam[b]);
    m.noalias() += w * (u.col(0) * u.col(b).adjoint());
    m.noalias() += std::conj(w) * (u.col(b) * u.col(0).adjoint());
  }
  return m;
}

StiefelTangentBasis tangent_basis_stiefel(const Svd& dec, int k, int r) {
  detail::require(dec.left_full.size() > 0,
                  "tangent_basis_stiefel: need a full left factor");
  const Matrix& s = dec.left_full;
  const Matrix& t = dec.right;
  const double inv_sqrt2 = 0.70710678118654752440;

  StiefelTangentBasis out;
  const int p = k * r - r * (r + 1) / 2;
  out.columns.resize(k * r, p);
  out.rho = Vector::Zero(k);
  out.rho.head(r) = dec.singular_values;

  int col = 0;
  for (int a = 0; a < r; ++a)
    for (int b = a + 1; b < r; ++b) {
      const Matrix xi = inv_sqrt2 * (s.col(a) * t.col(b).transpose() -
                                     s.col(b) * t.col(a).transpose());
      out.columns.col(col) = vec(xi);
      out.labels.push_back({1, a + 1, b + 1, false});
      ++col;
    }
  for (int a = 0; a < r; ++a)
    for (int b = r; b < k; ++b) {
      const Matrix xi = s.col(b) * t.col(a).transpose();
      out.columns.col(col) = vec(xi);
      out.labels.push_back({2, a + 1, b + 1, false});
      ++col;
    }
  return out;
}

GrassmannTangentBasis tangent_basis_grassmann(const SymEig& dec, int r) {
  const int k = static_cast<int>(dec.vectors.rows());
  detail::require(r >= 1 && r < k, "tangent_basis_grassmann: need 1 <= r < k");
  const Matrix& q = dec.vectors;
  const double inv_sqrt2 = 0.70710678118654752440;

  GrassmannTangentBasis out;
  const int p = r * (k - r);
  out.columns.resize(k * k, p);
  out.columns_vech.resize(k * (k + 1) / 2, p);
  out.lambda = dec.eigenvalues;

  int col = 0;
  for (int a = 0; a < r; ++a)
    for (int b = r; b < k; ++b) {
      const Matrix tangent = inv_sqrt2 * (q.col(a) * q.col(b).transpose() +
                                          q.col(b) * q.col(a).transpose());
      out.columns.col(col) = vec(tangent);
      out.columns_vech.col(col) = vech_sqrt2(tangent);
      out.labels.push_back({0, a + 1, b + 1, false});
      ++col;
    }
  return out;
}

CpTangentBasis tangent_basis_cp(const HermEig& dec) {
  const int k = static_cast<int>(dec.vectors.rows());
  detail::require(k >= 2, "tangent_basis_cp: need k >= 2");
  const CMatrix& u = dec.vectors;
  const double inv_sqrt2 = 0.70710678118654752440;
  const Complex im(0.0, 1.0);

  CpTangentBasis out;
  out.columns.resize(k * k, k - 1);
  out.columns_real.resize(k * k, 2 * (k - 1));
  out.lambda = dec.eigenvalues;

  for (int b = 1; b < k; ++b) {
    const CMatrix t_b =
        u.col(0) * u.col(b).adjoint() + u.col(b) * u.col(0).adjoint();
    const CMatrix t_phase = im * (u.col(0) * u.col(b).adjoint() -
                                  u.col(b) * u.col(0).adjoint());
    CMatrix xi = inv_sqrt2 * t_b;
    out.columns.col(b - 1) =
        Eigen::Map<const CVector>(xi.data(), xi.size());
    out.columns_real.col(b - 1) = vec_hermitian(CMatrix(inv_sqrt2 * t_b));
    out.columns_real.col(k - 1 + b - 1) =
        vec_hermitian(CMatrix(inv_sqrt2 * t_phase));
    out.labels.push_back({0, 1, b + 1, false});
  }
  for (int b = 1; b < k; ++b) out.labels.push_back({0, 1, b + 1, true});
  return out;
}

CovarianceEstimate clt_covariance_stiefel(const HJPair& hj, const Svd& dec,
                                          int k, int r) {
  if (dec.singular_values[r - 1] <= kGapTol)
    throw DegenerateProjection("clt_covariance_stiefel: rank-deficient center");
  const StiefelTangentBasis basis = tangent_basis_stiefel(dec, k, r);
  const int p = static_cast<int>(basis.labels.size());

  // Column i scaled by its delta-method weight 2^(2-alpha) / (rho_a + rho_b),
  // with the spectrum zero-padded beyond r.
  Matrix weighted = basis.columns;
  for (int i = 0; i < p; ++i) {
    const TangentLabel& l = basis.labels[static_cast<std::size_t>(i)];
    const double denom = basis.rho[l.a - 1] + basis.rho[l.b - 1];
    const double scale = std::pow(2.0, 2 - l.alpha) / denom;
    weighted.col(i) *= scale;
  }

  CovarianceEstimate out;
  out.spectrum = basis.rho;
  out.c = weighted.transpose() * hj.sandwich() * weighted;
  floor_psd(out.c, out.psd_floored, out.rank_deficient);
  return out;
}

CovarianceEstimate clt_covariance_grassmann(const HJPair& hj, const SymEig& dec,
                                            int r) {
  const int k = static_cast<int>(dec.vectors.rows());
  if (dec.eigenvalues[r - 1] - dec.eigenvalues[r] <= kGapTol)
    throw DegenerateProjection("clt_covariance_grassmann: eigengap too small");
  const GrassmannTangentBasis basis = tangent_basis_grassmann(dec, r);
  const int p = static_cast<int>(basis.labels.size());

  // The duplication pipeline maps the vec-coordinate directions into the
  // vech_sqrt2 coordinates the ambient sandwich lives in.
  const DuplicationMatrices dup = duplication_matrices(k);
  const Matrix to_vech =
      dup.g.cwiseInverse().asDiagonal() * dup.dup.transpose();
  Matrix weighted = to_vech * basis.columns;
  for (int i = 0; i < p; ++i) {
    const TangentLabel& l = basis.labels[static_cast<std::size_t>(i)];
    weighted.col(i) /= basis.lambda[l.a - 1] - basis.lambda[l.b - 1];
  }

  CovarianceEstimate out;
  out.spectrum = basis.lambda;
  out.c = weighted.transpose() * hj.sandwich() * weighted;
  floor_psd(out.c, out.psd_floored, out.rank_deficient);
  return out;
}

CpCovarianceEstimate clt_covariance_cp(const HJPair& hj, const HermEig& dec) {
  const int k = static_cast<int>(dec.vectors.rows());
  if (dec.eigenvalues[0] - dec.eigenvalues[1] <= kGapTol)
    throw DegenerateProjection("clt_covariance_cp: leading eigengap too small");
  const CpTangentBasis basis = tangent_basis_cp(dec);

  Matrix weighted = basis.columns_real;
  for (int b = 1; b < k; ++b) {
    const double w = 1.0 / (basis.lambda[0] - basis.lambda[b]);
    weighted.col(b - 1) *= w;
    weighted.col(k - 1 + b - 1) *= w;
  }

  CpCovarianceEstimate out;
  out.spectrum = basis.lambda;
  out.c_real = weighted.transpose() * hj.sandwich() * weighted;
  bool floored = false, rank_def = false;
  floor_psd(out.c_real, floored, rank_def);
  out.psd_floored = floored;
  out.rank_deficient = rank_def;

  // Complex coordinates y_b = u_1^* (M - M0) u_b = (w_b + i w_b~) / sqrt(2).
  const int q = k - 1;
  out.c = CMatrix::Zero(q, q);
  for (int b = 0; b < q; ++b)
    for (int d = 0; d < q; ++d) {
      const double re = 0.5 * (out.c_real(b, d) + out.c_real(q + b, q + d));
      const double imag = 0.5 * (out.c_real(q + b, d) - out.c_real(b, q + d));
      out.c(b, d) = Complex(re, imag);
    }
  out.c = 0.5 * (out.c + out.c.adjoint()).eval();
  return out;
}

AmbientMatrix gateaux_ambient(const std::vector<AmbientMatrix>& data,
                              const AmbientMatrix& probe, double eps,
                              const SolverOptions& opts) {
  detail::require(eps > 0.0 && eps < 1.0, "gateaux_ambient: eps in (0,1)");
  const MedianResult base = frobenius_median(data, opts);

  std::vector<AmbientMatrix> extended = data;
  extended.push_back(probe);
  Vector w(extended.size());
  const double n = static_cast<double>(data.size());
  w.head(data.size()).setConstant((1.0 - eps) / n);
  w[static_cast<Eigen::Index>(data.size())] = eps;
  const MedianResult tilted = frobenius_median_weighted(extended, w, opts);

  return tilted.median.minus(base.median).scaled(1.0 / eps);
}

}  // namespace pfm
