#include "pfm/baselines.hpp"

#include "pfm/samplers.hpp"
#include "pfm/spectral.hpp"

namespace pfm {

namespace {

constexpr double kArmijoSlope = 1e-4;
constexpr int kMaxBacktracks = 40;
constexpr double kAnchorTheta = 1e-12;
// A sum of n acos^2 terms carries relative rounding noise of order n*eps
// (~2e-14 at n=200); once per-iteration progress drops below that floor the
// iterate only chases noise. Same idea for the accepted geodesic step length.
constexpr double kObjectiveFloor = 1e-13;
constexpr double kStepFloor = 1e-12;

double clamped01(double x) { return std::min(1.0, std::max(0.0, x)); }

// Geodesic exponential on the unit sphere (renormalized for safety).
CVector sphere_exp(const CVector& z, const CVector& delta) {
  const double norm = delta.norm();
  if (norm <= 1e-300) return z;
  CVector out = std::cos(norm) * z + (std::sin(norm) / norm) * delta;
  return out / out.norm();
}

struct LogData {
  std::vector<CVector> dirs;  // unit tangents toward each datum
  std::vector<double> theta;  // geodesic distances
};

// Phase-aligned log map of every datum at z.
LogData log_all(const std::vector<CVector>& data, const CVector& z) {
  LogData out;
  out.dirs.reserve(data.size());
  out.theta.reserve(data.size());
  for (const CVector& x : data) {
    const Complex inner = x.dot(z);  // x^* z
    const double a = clamped01(std::abs(inner));
    const double theta = std::acos(a);
    CVector dir = CVector::Zero(z.size());
    if (theta > kAnchorTheta) {
      const Complex phase =
          std::abs(inner) > 0.0 ? inner / std::abs(inner) : Complex(1.0, 0.0);
      const CVector aligned = x * phase;
      dir = aligned - a * z;
      const double dn = dir.norm();
      if (dn > 0.0) dir /= dn;
    }
    out.dirs.push_back(std::move(dir));
    out.theta.push_back(theta);
  }
  return out;
}

double mean_objective(const std::vector<CVector>& data, const CVector& z) {
  double s = 0.0;
  for (const CVector& x : data) {
    const double a = clamped01(std::abs(x.dot(z)));
    const double t = std::acos(a);
    s += t * t;
  }
  return s;
}

double median_objective(const std::vector<CVector>& data, const CVector& z) {
  double s = 0.0;
  for (const CVector& x : data)
    s += std::acos(clamped01(std::abs(x.dot(z))));
  return s;
}

void check_unit_inputs(const std::vector<CVector>& data, const CVector& init) {
  detail::require(!data.empty(), "intrinsic estimator: empty data");
  detail::require(std::abs(init.norm() - 1.0) <= 1e-8,
                  "intrinsic estimator: init must be a unit vector");
  for (const CVector& x : data)
    detail::require(x.size() == init.size() &&
                        std::abs(x.norm() - 1.0) <= 1e-8,
                    "intrinsic estimator: data must be unit vectors");
}

}  // namespace

IntrinsicResult frechet_mean_cp(const std::vector<CVector>& data,
                                const CVector& init,
                                const SolverOptions& opts) {
  check_unit_inputs(data, init);
  CVector z = init / init.norm();
  double obj = mean_objective(data, z);

  IntrinsicResult res;
  int it = 0;
  for (; it < opts.max_iter; ++it) {
    const LogData logs = log_all(data, z);
    CVector delta = CVector::Zero(z.size());
    for (std::size_t j = 0; j < data.size(); ++j)
      delta += logs.theta[j] * logs.dirs[j];
    delta /= static_cast<double>(data.size());

    const double dn = delta.norm();
    if (dn <= opts.tol) {
      res.converged = true;
      break;
    }
    // Armijo backtracking along the geodesic; the Karcher step t=1 almost
    // always passes for concentrated data.
    double t = 1.0;
    bool moved = false;
    double drop = 0.0;
    for (int bt = 0; bt < kMaxBacktracks; ++bt, t *= 0.5) {
      const CVector cand = sphere_exp(z, t * delta);
      const double cand_obj = mean_objective(data, cand);
      if (cand_obj <= obj - kArmijoSlope * t * dn * dn) {
        drop = obj - cand_obj;
        z = cand;
        obj = cand_obj;
        moved = true;
        break;
      }
    }
    if (!moved) {
      res.converged = true;
      break;
    }
    // Data near the cut locus of the iterate keep the gradient from reaching
    // opts.tol exactly; stop once progress is numerically exhausted instead.
    if (t * dn <= kStepFloor ||
        drop <= kObjectiveFloor * std::max(1.0, obj)) {
      res.converged = true;
      ++it;
      break;
    }
  }
  res.z = z;
  res.objective = obj;
  res.iterations = it;
  return res;
}

IntrinsicResult frechet_median_cp(const std::vector<CVector>& data,
                                  const CVector& init,
                                  const SolverOptions& opts) {
  check_unit_inputs(data, init);
  const double n = static_cast<double>(data.size());
  CVector z = init / init.norm();
  double obj = median_objective(data, z);

  IntrinsicResult res;
  int it = 0;
  for (; it < opts.max_iter; ++it) {
    const LogData logs = log_all(data, z);
    // Weiszfeld direction with anchor handling: data at the current point
    // contribute resistance instead of a pull.
    CVector pull = CVector::Zero(z.size());
    double inv_sum = 0.0;
    double anchor_mass = 0.0;
    for (std::size_t j = 0; j < data.size(); ++j) {
      if (logs.theta[j] <= kAnchorTheta) {
        anchor_mass += 1.0 / n;
      } else {
        pull += logs.dirs[j] / n;
        inv_sum += 1.0 / (n * logs.theta[j]);
      }
    }
    if (inv_sum == 0.0) {
      res.converged = true;  // all mass at z
      break;
    }
    const double pull_norm = pull.norm();
    if (anchor_mass > 0.0 && pull_norm <= anchor_mass) {
      res.converged = true;  // anchored optimality condition
      break;
    }
    CVector delta = pull / inv_sum;
    if (anchor_mass > 0.0) delta *= 1.0 - anchor_mass / pull_norm;

    const double dn = delta.norm();
    if (dn <= opts.tol) {
      res.converged = true;
      break;
    }
    double t = 1.0;
    bool moved = false;
    for (int bt = 0; bt < kMaxBacktracks; ++bt, t *= 0.5) {
      const CVector cand = sphere_exp(z, t * delta);
      const double cand_obj = median_objective(data, cand);
      if (cand_obj < obj - 1e-15 * std::max(1.0, std::abs(obj))) {
        z = cand;
        obj = cand_obj;
        moved = true;
        break;
      }
    }
    if (!moved) {
      res.converged = true;
      break;
    }
    if (t * dn <= opts.tol && it > 0) {
      res.converged = true;
      break;
    }
  }
  res.z = z;
  res.objective = obj;
  res.iterations = it;
  return res;
}

IntrinsicResult median_of_means_cp(const std::vector<CVector>& data,
                                   int n_subsets, const CVector& init,
                                   Pcg64& rng, const SolverOptions& opts) {
  check_unit_inputs(data, init);
  const int n = static_cast<int>(data.size());
  detail::require(n_subsets >= 1 && n_subsets <= n,
                  "median_of_means_cp: need 1 <= subsets <= n");

  // Seeded shuffle, then contiguous blocks whose sizes differ by at most one
  // (larger blocks first).
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (int i = n - 1; i > 0; --i)
    std::swap(idx[static_cast<std::size_t>(i)],
              idx[static_cast<std::size_t>(rng.uniform_int(i + 1))]);

  const int base = n / n_subsets;
  const int rem = n % n_subsets;
  std::vector<CVector> block_means;
  block_means.reserve(static_cast<std::size_t>(n_subsets));
  int cursor = 0;
  for (int b = 0; b < n_subsets; ++b) {
    const int len = base + (b < rem ? 1 : 0);
    std::vector<CVector> block;
    block.reserve(static_cast<std::size_t>(len));
    for (int t = 0; t < len; ++t)
      block.push_back(data[static_cast<std::size_t>(idx[static_cast<std::size_t>(cursor++)])]);
    block_means.push_back(frechet_mean_cp(block, init, opts).z);
  }
  return frechet_median_cp(block_means, block_means.front(), opts);
}

CVector procrustes_align(const CVector& u, const CVector& z0) {
  detail::require(u.size() == z0.size(), "procrustes_align: size mismatch");
  const Complex inner = z0.dot(u);  // z0^* u
  if (std::abs(inner) <= 1e-14)
    throw AlignmentUndefined(
        "procrustes_align: estimate orthogonal to the reference");
  return u * std::exp(Complex(0.0, -std::arg(inner)));
}

namespace {

double frame_objective(const std::vector<Matrix>& t_mats, const Matrix& u) {
  double v = 0.0;
  for (int r = 0; r < 3; ++r) v += u.col(r).dot(t_mats[static_cast<std::size_t>(r)] * u.col(r));
  return v;
}

Matrix riemannian_grad(const std::vector<Matrix>& t_mats, const Matrix& u) {
  Matrix g(3, 3);
  for (int r = 0; r < 3; ++r)
    g.col(r) = 2.0 * (t_mats[static_cast<std::size_t>(r)] * u.col(r));
  const Matrix utg = u.transpose() * g;
  return g - u * (0.5 * (utg + utg.transpose()));
}

FrameMeanResult ascend(const std::vector<Matrix>& t_mats, Matrix u,
                       const SolverOptions& opts) {
  double obj = frame_objective(t_mats, u);
  FrameMeanResult res;
  int it = 0;
  for (; it < opts.max_iter; ++it) {
    const Matrix grad = riemannian_grad(t_mats, u);
    const double gn = grad.norm();
    if (gn <= opts.tol * std::max(1.0, std::abs(obj))) {
      res.converged = true;
      break;
    }
    double t = 1.0;
    bool moved = false;
    for (int bt = 0; bt < kMaxBacktracks; ++bt, t *= 0.5) {
      Matrix cand;
      try {
        cand = project_stiefel(u + t * grad).x;
      } catch (const DegenerateProjection&) {
        continue;
      }
      const double cand_obj = frame_objective(t_mats, cand);
      if (cand_obj >= obj + kArmijoSlope * t * gn * gn) {
        u = cand;
        obj = cand_obj;
        moved = true;
        break;
      }
    }
    if (!moved) {
      res.converged = true;
      break;
    }
  }
  res.frame = ProjStiefelPoint::canonical(u);
  res.objective = obj;
  res.iterations = it;
  return res;
}

}  // namespace

FrameMeanResult frame_mean_axial(const std::vector<ProjStiefelPoint>& data,
                                 int extra_starts, const SolverOptions& opts) {
  detail::require(!data.empty(), "frame_mean_axial: empty data");
  const int n = static_cast<int>(data.size());
  std::vector<Matrix> t_mats(3, Matrix::Zero(3, 3));
  for (const ProjStiefelPoint& p : data) {
    detail::require(p.k() == 3 && p.r() == 3,
                    "frame_mean_axial: need 3x3 frames");
    for (int r = 0; r < 3; ++r) {
      const Vector c = p.x.col(r);
      t_mats[static_cast<std::size_t>(r)] += c * c.transpose();
    }
  }
  for (Matrix& t : t_mats)
    t = (t / static_cast<double>(n) - Matrix::Identity(3, 3) / 3.0).eval();

  // Primary start: per-axis leading eigenvectors snapped to a frame.
  std::vector<Matrix> starts;
  {
    Matrix v(3, 3);
    for (int r = 0; r < 3; ++r)
      v.col(r) = sym_eig(t_mats[static_cast<std::size_t>(r)]).vectors.col(0);
    try {
      starts.push_back(project_stiefel(v).x);
    } catch (const DegenerateProjection&) {
      // eigenvectors collapsed onto each other; random starts still apply
    }
  }
  Pcg64 rng(0x0a71a1u, 7u);  // fixed internal stream: results stay deterministic
  for (int s = 0; s < extra_starts; ++s)
    starts.push_back(random_orthogonal(3, rng));
  if (starts.empty()) starts.push_back(Matrix::Identity(3, 3));

  FrameMeanResult best;
  bool have = false;
  for (const Matrix& s : starts) {
    FrameMeanResult cand = ascend(t_mats, s, opts);
    if (!have || cand.objective > best.objective) {
      best = std::move(cand);
      have = true;
    }
  }
  return best;
}

}  // namespace pfm
