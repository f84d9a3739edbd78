#pragma once

#include "pfm/proj_stiefel.hpp"
#include "pfm/rng.hpp"

#include <functional>

namespace pfm {

// (k-1) x k Helmert submatrix: row j has j entries 1/sqrt(j(j+1)) followed by
// -j/sqrt(j(j+1)) and zeros; rows are orthonormal and annihilate constants.
Matrix helmert_submatrix(int k);

// Centered-and-scaled landmark configuration: z = H c / ||H c||. Rejects
// configurations that are a single repeated point (||H c|| ~ 0).
CVector preshape(const CVector& config);

// Complex Bingham distribution on the unit complex sphere, density
// proportional to exp(x^* Lambda x). Only eigenvalue gaps matter; Lambda and
// Lambda + c I produce identical draws.
struct ComplexBinghamParams {
  CMatrix lambda;  // Hermitian parameter matrix
};

// Exact acceptance-rejection sampler via the truncated-exponential simplex
// representation in the eigenbasis. Throws SamplerStalled if a draw exceeds
// the attempt budget.
std::vector<CVector> sample_complex_bingham(const ComplexBinghamParams& params,
                                            int n, Pcg64& rng);

// Axial-frame Watson family on sign-quotiented 3-frames, density proportional
// to exp(sum_j kappa_j (x_j^t m_j)^2).
struct FrameWatsonParams {
  Eigen::Vector3d kappas;
  Matrix mode;  // 3x3 orthonormal frame of mode axes
};

struct FrameWatsonOptions {
  int burn_in = 1000;
  int max_thinning = 256;
  double target_lag1_autocorr = 0.1;
};

// Metropolis-Hastings with small Givens-rotation proposals on the rotation
// group (every sign-coset meets it); step size adapts during burn-in, then
// thinning is chosen so the lag-1 autocorrelation of the log-density drops
// below the target. Deterministic for a fixed generator state.
std::vector<ProjStiefelPoint> sample_frame_watson(
    const FrameWatsonParams& params, int n, Pcg64& rng,
    const FrameWatsonOptions& opts = {});

// Shape-space outliers: standard complex normal projected onto the orthogonal
// complement of z0, then normalized -- uniform on the far submanifold.
CVector shape_outlier(const CVector& z0, Pcg64& rng);

// The fixed contaminating frame used by the frame experiments.
ProjStiefelPoint frame_outlier();

// Replaces n1 distinct random entries of `sample` with draws from `source`;
// returns the replaced indices (sorted).
template <typename T>
std::vector<int> contaminate(std::vector<T>& sample, int n1,
                             const std::function<T(Pcg64&)>& source,
                             Pcg64& rng) {
  detail::require(n1 >= 0 && n1 <= static_cast<int>(sample.size()),
                  "contaminate: bad outlier count");
  const int n = static_cast<int>(sample.size());
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  // Partial Fisher-Yates: the first n1 slots become the replaced set.
  for (int i = 0; i < n1; ++i) {
    const int j = i + rng.uniform_int(n - i);
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  std::vector<int> chosen(idx.begin(), idx.begin() + n1);
  std::sort(chosen.begin(), chosen.end());
  for (int i : chosen) sample[static_cast<std::size_t>(i)] = source(rng);
  return chosen;
}

// Haar-uniform orthogonal / unitary matrices (QR of a Gaussian matrix with
// the R-diagonal sign fix) and uniform sphere points; used by the
// equivariance and projection-optimality tests.
Matrix random_orthogonal(int k, Pcg64& rng);
CMatrix random_unitary(int k, Pcg64& rng);
Vector random_unit_vector(int k, Pcg64& rng);
CVector random_complex_unit_vector(int k, Pcg64& rng);
StiefelPoint random_stiefel(int k, int r, Pcg64& rng);

}  // namespace pfm
