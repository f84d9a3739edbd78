#pragma once

#include "pfm/proj_stiefel.hpp"
#include "pfm/rng.hpp"

namespace pfm {

// Outcome of the intrinsic (geodesic-distance) iterative estimators on the
// projective shape sphere. `z` is a unit representative.
struct IntrinsicResult {
  CVector z;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Frechet mean: minimizes sum_j arccos^2 |x_j^* z| by Riemannian gradient
// descent (geodesic log/exp maps, Armijo backtracking, normalize retraction).
// `init` must be a unit vector; the experiments deliberately pass adversarial
// starting points, so no internal restart is attempted.
IntrinsicResult frechet_mean_cp(const std::vector<CVector>& data,
                                const CVector& init,
                                const SolverOptions& opts = {});

// Frechet median: minimizes sum_j arccos |x_j^* z| by the manifold Weiszfeld
// iteration with 1/distance weights, anchor-guarded, with an objective
// backtracking safeguard.
IntrinsicResult frechet_median_cp(const std::vector<CVector>& data,
                                  const CVector& init,
                                  const SolverOptions& opts = {});

// Median of means: a seeded equal-as-possible random partition into
// `n_subsets` blocks, a Frechet mean per block (each from `init`), then the
// Frechet median of the block means (initialized at the first block mean).
IntrinsicResult median_of_means_cp(const std::vector<CVector>& data,
                                   int n_subsets, const CVector& init,
                                   Pcg64& rng, const SolverOptions& opts = {});

// Phase alignment: u e^{-i arg(z0^* u)}, the representative of [u] closest to
// z0. Throws AlignmentUndefined when z0 and u are orthogonal.
CVector procrustes_align(const CVector& u, const CVector& z0);

struct FrameMeanResult {
  ProjStiefelPoint frame;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Axial frame mean: maximizes sum_r u_r^t T_r u_r with
// T_r = mean_j (x_jr x_jr^t - I/3) over orthonormal frames, by projected
// gradient ascent with polar retraction and Armijo backtracking. Multi-start:
// the frame assembled from the per-axis leading eigenvectors plus a few
// deterministic random rotations of it; best final objective wins.
FrameMeanResult frame_mean_axial(const std::vector<ProjStiefelPoint>& data,
                                 int extra_starts = 4,
                                 const SolverOptions& opts = {});

}  // namespace pfm
