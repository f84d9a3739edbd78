#include "pfm/manifolds.hpp"

#include "pfm/vectorize.hpp"

namespace pfm {

namespace {
constexpr double kGapTolGrassmann = 1e-10;
constexpr double kGapTolCp = 1e-10;
constexpr double kRankTolStiefel = 1e-12;

double clamped_acos(double c) {
  return std::acos(std::min(1.0, std::max(-1.0, c)));
}
}  // namespace

bool GrassmannPoint::valid(double tol) const {
  if (!detail::all_finite(p) || p.rows() != p.cols()) return false;
  if ((p - p.transpose()).norm() > tol) return false;
  if ((p * p - p).norm() > tol) return false;
  return std::abs(p.trace() - r) <= std::max(tol, 1e-8);
}

GrassmannPoint GrassmannPoint::from_basis(const Matrix& basis) {
  StiefelPoint s{basis};
  detail::require(s.valid(1e-8), "GrassmannPoint: basis not orthonormal");
  return GrassmannPoint{basis * basis.transpose(),
                        static_cast<int>(basis.cols())};
}

bool CPPoint::valid(double tol) const {
  if (!detail::all_finite(p) || p.rows() != p.cols()) return false;
  if ((p - p.adjoint()).norm() > tol) return false;
  if ((p * p - p).norm() > tol) return false;
  return std::abs(p.trace().real() - 1.0) <= std::max(tol, 1e-8);
}

CPPoint CPPoint::from_vector(const CVector& z) {
  detail::require(z.size() > 0 && std::abs(z.norm() - 1.0) <= 1e-8,
                  "CPPoint: need unit vector");
  const CVector u = z / z.norm();
  return CPPoint{u * u.adjoint()};
}

CVector CPPoint::representative() const {
  return herm_eig(p).vectors.col(0);
}

StiefelPoint project_stiefel(const Matrix& a) {
  const Svd dec = svd(a);
  if (dec.singular_values[dec.singular_values.size() - 1] <= kRankTolStiefel)
    throw DegenerateProjection(
        "project_stiefel: rank-deficient input, polar factor not unique");
  return StiefelPoint{dec.left * dec.right.transpose()};
}

GrassmannPoint project_grassmann(const Matrix& a, int r) {
  detail::require(r >= 1 && r < a.rows(), "project_grassmann: need 1 <= r < k");
  const SymEig dec = sym_eig(a);
  if (dec.eigenvalues[r - 1] - dec.eigenvalues[r] <= kGapTolGrassmann)
    throw DegenerateProjection(
        "project_grassmann: eigengap at r too small, projection not unique");
  const Matrix q = dec.vectors.leftCols(r);
  return GrassmannPoint{q * q.transpose(), r};
}

CPPoint project_cp(const CMatrix& a) {
  const HermEig dec = herm_eig(a);
  detail::require(a.rows() >= 2, "project_cp: need k >= 2");
  if (dec.eigenvalues[0] - dec.eigenvalues[1] <= kGapTolCp)
    throw DegenerateProjection(
        "project_cp: leading eigengap too small, projection not unique");
  const CVector u = dec.vectors.col(0);
  return CPPoint{u * u.adjoint()};
}

namespace {

template <typename PointT, typename Embed, typename Project>
PfmResult<PointT> pfm_impl(std::size_t n, Embed&& embed, Project&& project,
                           const SolverOptions& opts) {
  detail::require(n > 0, "pfm: empty data");
  std::vector<AmbientMatrix> ambient;
  ambient.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ambient.push_back(embed(i));
  MedianResult med = frobenius_median(ambient, opts);
  PointT point = project(med.median);
  return PfmResult<PointT>{std::move(point), std::move(med)};
}

}  // namespace

PfmResult<StiefelPoint> pfm(const std::vector<StiefelPoint>& data,
                            const SolverOptions& opts) {
  for (const auto& d : data)
    detail::require(d.valid(1e-8), "pfm: invalid Stiefel point");
  return pfm_impl<StiefelPoint>(
      data.size(),
      [&](std::size_t i) { return AmbientMatrix::general(data[i].x); },
      [](const AmbientMatrix& a) { return project_stiefel(a.real()); }, opts);
}

PfmResult<GrassmannPoint> pfm(const std::vector<GrassmannPoint>& data,
                              const SolverOptions& opts) {
  detail::require(!data.empty(), "pfm: empty data");
  const int r = data.front().r;
  for (const auto& d : data)
    detail::require(d.valid(1e-8) && d.r == r,
                    "pfm: invalid Grassmann point or mixed ranks");
  return pfm_impl<GrassmannPoint>(
      data.size(),
      [&](std::size_t i) { return AmbientMatrix::symmetric(data[i].p); },
      [&](const AmbientMatrix& a) { return project_grassmann(a.real(), r); },
      opts);
}

PfmResult<CPPoint> pfm(const std::vector<CPPoint>& data,
                       const SolverOptions& opts) {
  for (const auto& d : data)
    detail::require(d.valid(1e-8), "pfm: invalid projective point");
  return pfm_impl<CPPoint>(
      data.size(),
      [&](std::size_t i) { return AmbientMatrix::hermitian(data[i].p); },
      [](const AmbientMatrix& a) { return project_cp(a.cplx()); }, opts);
}

StiefelPoint extrinsic_mean(const std::vector<StiefelPoint>& data) {
  detail::require(!data.empty(), "extrinsic_mean: empty data");
  Matrix m = Matrix::Zero(data.front().k(), data.front().r());
  for (const auto& d : data) m += d.x;
  return project_stiefel(m / static_cast<double>(data.size()));
}

GrassmannPoint extrinsic_mean(const std::vector<GrassmannPoint>& data) {
  detail::require(!data.empty(), "extrinsic_mean: empty data");
  Matrix m = Matrix::Zero(data.front().k(), data.front().k());
  for (const auto& d : data) m += d.p;
  return project_grassmann(m / static_cast<double>(data.size()),
                           data.front().r);
}

CPPoint extrinsic_mean(const std::vector<CPPoint>& data) {
  detail::require(!data.empty(), "extrinsic_mean: empty data");
  CMatrix m = CMatrix::Zero(data.front().k(), data.front().k());
  for (const auto& d : data) m += d.p;
  return project_cp(m / static_cast<double>(data.size()));
}

double extrinsic_distance(const StiefelPoint& a, const StiefelPoint& b) {
  return (a.x - b.x).norm();
}
double extrinsic_distance(const GrassmannPoint& a, const GrassmannPoint& b) {
  return (a.p - b.p).norm();
}
double extrinsic_distance(const CPPoint& a, const CPPoint& b) {
  return (a.p - b.p).norm();
}

double angular_error(const CVector& a, const CVector& b) {
  detail::require(a.size() == b.size(), "angular_error: size mismatch");
  const double c = std::abs(a.dot(b)) / (a.norm() * b.norm());
  return clamped_acos(c);
}

double angular_error(const Vector& a, const Vector& b) {
  detail::require(a.size() == b.size(), "angular_error: size mismatch");
  const double c = std::abs(a.dot(b)) / (a.norm() * b.norm());
  return clamped_acos(c);
}

}  // namespace pfm
