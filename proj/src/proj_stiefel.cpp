#include "pfm/proj_stiefel.hpp"

#include "pfm/spectral.hpp"

namespace pfm {

namespace {
constexpr double kLeaderGapTol = 1e-10;
constexpr double kLeaderIndependenceTol = 1e-8;

void flip_to_canonical(Matrix& frame) {
  for (int j = 0; j < frame.cols(); ++j) {
    int best = 0;
    double mx = std::abs(frame(0, j));
    for (int i = 1; i < frame.rows(); ++i)
      if (std::abs(frame(i, j)) > mx) {
        mx = std::abs(frame(i, j));
        best = i;
      }
    if (frame(best, j) < 0.0) frame.col(j) = -frame.col(j);
  }
}
}  // namespace

ProjStiefelPoint ProjStiefelPoint::canonical(Matrix frame) {
  StiefelPoint s{frame};
  detail::require(s.valid(1e-8), "ProjStiefelPoint: frame not orthonormal");
  flip_to_canonical(frame);
  return ProjStiefelPoint{std::move(frame)};
}

bool ProjStiefelPoint::valid(double tol) const {
  return StiefelPoint{x}.valid(tol);
}

double ProjStiefelPoint::quotient_distance(const ProjStiefelPoint& other) const {
  detail::require(k() == other.k() && r() == other.r(),
                  "quotient_distance: shape mismatch");
  // Per-column sign choice decouples across columns.
  double d2 = 0.0;
  for (int j = 0; j < r(); ++j) {
    const double plus = (x.col(j) - other.x.col(j)).squaredNorm();
    const double minus = (x.col(j) + other.x.col(j)).squaredNorm();
    d2 += std::min(plus, minus);
  }
  return std::sqrt(d2);
}

AxialTuple embed_frame(const ProjStiefelPoint& p) {
  detail::require(p.valid(1e-8), "embed_frame: invalid frame");
  AxialTuple t;
  t.components.reserve(p.r());
  for (int j = 0; j < p.r(); ++j) {
    const Vector c = p.x.col(j);
    t.components.push_back(c * c.transpose());
  }
  return t;
}

AxialTuple project_to_rank1_tuple(const AxialTuple& b) {
  detail::require(!b.components.empty(), "project_to_rank1_tuple: empty tuple");
  const int k = b.k();
  const int r = b.r();
  Matrix leaders(k, r);
  AxialTuple out;
  out.components.reserve(r);
  for (int j = 0; j < r; ++j) {
    const SymEig dec = sym_eig(b.components[static_cast<std::size_t>(j)]);
    if (dec.eigenvalues[0] - dec.eigenvalues[1] <= kLeaderGapTol)
      throw DegenerateFrame(
          "project_to_rank1_tuple: leading eigengap too small in component " +
          std::to_string(j + 1));
    const Vector q = dec.vectors.col(0);
    leaders.col(j) = q;
    out.components.push_back(q * q.transpose());
  }
  const Svd dec = svd(leaders);
  if (dec.singular_values[r - 1] <= kLeaderIndependenceTol)
    throw DegenerateFrame(
        "project_to_rank1_tuple: leading eigenvectors are linearly dependent");
  return out;
}

StiefelPoint project_frame(const Matrix& q, const std::vector<int>& eps) {
  detail::require(q.rows() >= q.cols(), "project_frame: need k >= r leaders");
  detail::require(static_cast<int>(eps.size()) == q.cols(),
                  "project_frame: sign vector length mismatch");
  for (int e : eps)
    detail::require(e == 1 || e == -1, "project_frame: signs must be +-1");
  const Svd dec = svd(q);
  if (dec.singular_values[q.cols() - 1] <= kLeaderIndependenceTol)
    throw DegenerateFrame("project_frame: rank-deficient leaders");
  // sum_j s_j (eps .* t_j)^t  ==  polar(Q) diag(eps).
  Matrix twisted_right = dec.right;
  for (int i = 0; i < twisted_right.rows(); ++i)
    twisted_right.row(i) *= static_cast<double>(eps[static_cast<std::size_t>(i)]);
  return StiefelPoint{dec.left * twisted_right.transpose()};
}

ProjStiefelPfmResult pfm_proj_stiefel(const std::vector<ProjStiefelPoint>& data,
                                      const SolverOptions& opts) {
  detail::require(!data.empty(), "pfm_proj_stiefel: empty data");
  const int k = data.front().k();
  const int r = data.front().r();

  std::vector<std::vector<Matrix>> tuples;
  tuples.reserve(data.size());
  for (const auto& d : data) {
    detail::require(d.k() == k && d.r() == r,
                    "pfm_proj_stiefel: mixed frame sizes");
    tuples.push_back(embed_frame(d).components);
  }

  auto [median_tuple, med] = tuple_frobenius_median(tuples, opts);

  AxialTuple b{std::move(median_tuple)};
  Matrix leaders(k, r);
  {
    const AxialTuple rank1 = project_to_rank1_tuple(b);
    for (int j = 0; j < r; ++j) {
      const SymEig dec = sym_eig(rank1.components[static_cast<std::size_t>(j)]);
      leaders.col(j) = dec.vectors.col(0);
    }
  }

  ProjStiefelPfmResult out;
  out.ambient = std::move(med);
  out.coset.reserve(1u << r);
  std::vector<int> eps(static_cast<std::size_t>(r), 1);
  for (unsigned mask = 0; mask < (1u << r); ++mask) {
    for (int j = 0; j < r; ++j)
      eps[static_cast<std::size_t>(j)] = (mask >> j) & 1u ? -1 : 1;
    out.coset.push_back(project_frame(leaders, eps));
  }
  out.point = ProjStiefelPoint::canonical(out.coset.front().x);
  return out;
}

Vector frame_angular_errors(const ProjStiefelPoint& est,
                            const ProjStiefelPoint& truth) {
  detail::require(est.k() == truth.k() && est.r() == truth.r(),
                  "frame_angular_errors: shape mismatch");
  Vector errs(est.r());
  for (int j = 0; j < est.r(); ++j)
    errs[j] = angular_error(Vector(est.x.col(j)), Vector(truth.x.col(j)));
  return errs;
}

}  // namespace pfm
