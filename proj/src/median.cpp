#include "pfm/median.hpp"

#include "pfm/vectorize.hpp"

#include <Eigen/SVD>

namespace pfm {

namespace {

constexpr double kAnchorRel = 1e-14;

double objective_at(const Matrix& pts, const Vector& w, const Vector& m) {
  return ((pts.colwise() - m).colwise().norm() * w.asDiagonal()).sum();
}

// Collinearity probe: second singular value of the centered cloud relative to
// the first. All-identical clouds are unique minimizers, not collinear.
bool collinear(const Matrix& pts) {
  const int n = static_cast<int>(pts.cols());
  if (n <= 1) return false;
  Matrix centered = pts.colwise() - Vector(pts.rowwise().mean());
  Eigen::JacobiSVD<Matrix> dec(centered);
  const Vector s = dec.singularValues();
  if (s.size() == 0 || s[0] <= 0.0) return false;  // single repeated point
  if (s.size() < 2) return true;                   // p == 1: a line by nature
  return s[1] <= 1e-10 * s[0];
}

}  // namespace

void WeightedSample::validate() const {
  detail::require(points.size() > 0, "WeightedSample: empty");
  detail::require(detail::all_finite(points),
                  "WeightedSample: non-finite coordinates");
  detail::require(weights.size() == points.cols(),
                  "WeightedSample: weight count mismatch");
  detail::require(weights.minCoeff() >= 0.0,
                  "WeightedSample: negative weight");
  detail::require(std::abs(weights.sum() - 1.0) <= 1e-12,
                  "WeightedSample: weights must sum to 1");
}

WeightedSample WeightedSample::uniform(const Matrix& points) {
  WeightedSample s;
  s.points = points;
  s.weights = Vector::Constant(points.cols(), 1.0 / points.cols());
  return s;
}

SpatialMedianResult spatial_median(const WeightedSample& sample,
                                   const SolverOptions& opts) {
  sample.validate();
  detail::require(opts.tol > 0 && opts.max_iter >= 1,
                  "spatial_median: bad solver options");
  const Matrix& pts = sample.points;
  const Vector& w = sample.weights;
  const int n = static_cast<int>(pts.cols());

  SpatialMedianResult res;
  if (n == 1) {
    res.median = pts.col(0);
    res.converged = true;
    res.objective = 0.0;
    return res;
  }

  // Scale reference for the anchor test.
  Vector mean = pts * w;
  const double scale =
      std::max(1.0, (pts.colwise() - mean).colwise().norm().maxCoeff());

  Vector m = mean;
  double obj = objective_at(pts, w, m);
  if (opts.record_trace) res.trace.push_back(obj);

  int it = 0;
  for (; it < opts.max_iter; ++it) {
    // Distances to the current iterate.
    Vector d = (pts.colwise() - m).colwise().norm();

    double anchor_weight = 0.0;
    Vector inv = Vector::Zero(n);
    for (int i = 0; i < n; ++i) {
      if (d[i] <= kAnchorRel * scale)
        anchor_weight += w[i];
      else
        inv[i] = w[i] / d[i];
    }

    const double inv_sum = inv.sum();
    Vector m_next;
    if (anchor_weight == 0.0) {
      m_next = (pts * inv) / inv_sum;
    } else if (inv_sum == 0.0) {
      // All mass sits on the iterate: it is the minimizer.
      res.converged = true;
      res.gap = 0.0;
      break;
    } else {
      // Vardi-Zhang: R is the pull of the non-anchored points; the anchor's
      // weight resists it.
      Vector r_dir = pts * inv - inv_sum * m;
      const double r_norm = r_dir.norm();
      if (r_norm <= anchor_weight) {
        res.converged = true;
        res.gap = 0.0;
        break;
      }
      const Vector t_step = (pts * inv) / inv_sum;
      const double beta = anchor_weight / r_norm;
      m_next = (1.0 - beta) * t_step + beta * m;
    }

    const double step = (m_next - m).norm() / std::max(1.0, m.norm());
    m = m_next;
    if (opts.record_trace) {
      obj = objective_at(pts, w, m);
      res.trace.push_back(obj);
    }
    if (step <= opts.tol) {
      res.converged = true;
      res.gap = step;
      ++it;
      break;
    }
    res.gap = step;
  }

  res.median = m;
  res.iterations = it;
  res.objective = objective_at(pts, w, m);
  res.nonunique = collinear(pts);
  return res;
}

namespace {

MedianResult wrap_result(const std::vector<AmbientMatrix>& data,
                         SpatialMedianResult&& sp) {
  const AmbientMatrix& a0 = data.front();
  MedianResult out{unvectorized(a0.tag(), a0.rows(), a0.cols(), sp.median,
                                a0.tuple_size()),
                   sp.iterations,
                   sp.gap,
                   sp.converged,
                   sp.objective,
                   sp.nonunique,
                   std::move(sp.trace)};
  return out;
}

}  // namespace

MedianResult frobenius_median(const std::vector<AmbientMatrix>& data,
                              const SolverOptions& opts) {
  detail::require(!data.empty(), "frobenius_median: empty data");
  return frobenius_median_weighted(
      data, Vector::Constant(data.size(), 1.0 / data.size()), opts);
}

MedianResult frobenius_median_weighted(const std::vector<AmbientMatrix>& data,
                                       const Vector& weights,
                                       const SolverOptions& opts) {
  detail::require(!data.empty(), "frobenius_median: empty data");
  const AmbientMatrix& a0 = data.front();
  WeightedSample s;
  s.points.resize(vectorized(a0).size(), data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    detail::require(data[i].same_shape(a0),
                    "frobenius_median: mixed shapes/structures");
    s.points.col(static_cast<Eigen::Index>(i)) = vectorized(data[i]);
  }
  s.weights = weights;
  return wrap_result(data, spatial_median(s, opts));
}

std::pair<std::vector<Matrix>, MedianResult> tuple_frobenius_median(
    const std::vector<std::vector<Matrix>>& data, const SolverOptions& opts) {
  detail::require(!data.empty(), "tuple_frobenius_median: empty data");
  std::vector<AmbientMatrix> wrapped;
  wrapped.reserve(data.size());
  for (const auto& tup : data)
    wrapped.push_back(AmbientMatrix::symmetric_tuple(tup));
  MedianResult res = frobenius_median(wrapped, opts);
  return {res.median.tuple(), std::move(res)};
}

}  // namespace pfm
