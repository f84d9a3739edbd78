#pragma once

#include "pfm/types.hpp"

namespace pfm {

// Weighted point cloud in R^p; columns of `points` are the observations.
struct WeightedSample {
  Matrix points;    // p x n
  Vector weights;   // n, nonnegative, sums to 1 within 1e-12
  void validate() const;
  static WeightedSample uniform(const Matrix& points);
};

struct SpatialMedianResult {
  Vector median;
  int iterations = 0;
  double gap = 0.0;        // final relative-step / optimality-slack proxy
  bool converged = false;  // false means the iteration cap was hit
  double objective = 0.0;  // sum_i w_i ||y_i - median||
  bool nonunique = false;  // collinear data: minimizer may be non-unique
  std::vector<double> trace;  // per-iteration objectives if requested
};

// Weighted spatial median by the Weiszfeld iteration with the Vardi-Zhang
// update whenever the iterate lands on a data point (within 1e-14 of the data
// scale). Starts from the weighted coordinatewise mean; descent is monotone.
SpatialMedianResult spatial_median(const WeightedSample& sample,
                                   const SolverOptions& opts = {});

struct MedianResult {
  AmbientMatrix median;
  int iterations = 0;
  double gap = 0.0;
  bool converged = false;
  double objective = 0.0;
  bool nonunique = false;
  std::vector<double> trace;
};

// Frobenius median of ambient elements: the structure-appropriate isometric
// vectorization turns it into the spatial median above.
MedianResult frobenius_median(const std::vector<AmbientMatrix>& data,
                              const SolverOptions& opts = {});
MedianResult frobenius_median_weighted(const std::vector<AmbientMatrix>& data,
                                       const Vector& weights,
                                       const SolverOptions& opts = {});

// Median of r-tuples of symmetric k x k matrices (the ambient space of the
// axial-frame estimator); minimizes the l2-coupled product-space objective,
// not per-component medians.
std::pair<std::vector<Matrix>, MedianResult> tuple_frobenius_median(
    const std::vector<std::vector<Matrix>>& data,
    const SolverOptions& opts = {});

}  // namespace pfm
