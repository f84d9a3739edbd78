#include "pfm/samplers.hpp"

#include "pfm/spectral.hpp"

#include <Eigen/QR>

namespace pfm {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr long kStallBudget = 20000000L;  // attempts per Bingham draw
}  // namespace

Matrix helmert_submatrix(int k) {
  detail::require(k >= 2, "helmert_submatrix: k >= 2");
  Matrix h = Matrix::Zero(k - 1, k);
  for (int j = 1; j < k; ++j) {
    const double s = 1.0 / std::sqrt(static_cast<double>(j) * (j + 1));
    for (int c = 0; c < j; ++c) h(j - 1, c) = s;
    h(j - 1, j) = -static_cast<double>(j) * s;
  }
  return h;
}

CVector preshape(const CVector& config) {
  detail::require(config.size() >= 2, "preshape: need at least two landmarks");
  const Matrix h = helmert_submatrix(static_cast<int>(config.size()));
  const CVector centered = h.cast<Complex>() * config;
  const double norm = centered.norm();
  detail::require(norm > 1e-12 * config.norm() && norm > 0.0,
                  "preshape: degenerate configuration (coincident landmarks)");
  return centered / norm;
}

std::vector<CVector> sample_complex_bingham(const ComplexBinghamParams& params,
                                            int n, Pcg64& rng) {
  detail::require(n >= 0, "sample_complex_bingham: n >= 0");
  const HermEig dec = herm_eig(params.lambda);
  const int q = static_cast<int>(params.lambda.rows());
  detail::require(q >= 2, "sample_complex_bingham: dimension >= 2");

  // Gaps from the top eigenvalue; the density in the eigenbasis is
  // proportional to exp(-sum_j gap_j |w_j|^2), invariant to shifts of Lambda.
  Vector gap(q);
  for (int j = 0; j < q; ++j) gap[j] = dec.eigenvalues[0] - dec.eigenvalues[j];

  // Precompute the truncated-exponential CDF constants for j >= 2.
  Vector one_minus_exp(q);
  for (int j = 1; j < q; ++j)
    one_minus_exp[j] = -std::expm1(-gap[j]);  // 1 - e^{-gap}

  std::vector<CVector> out;
  out.reserve(static_cast<std::size_t>(n));
  Vector s(q);
  for (int i = 0; i < n; ++i) {
    long attempts = 0;
    for (;;) {
      if (++attempts > kStallBudget)
        throw SamplerStalled(
            "sample_complex_bingham: acceptance rate below budget");
      double tail = 0.0;
      for (int j = 1; j < q; ++j) {
        const double u = rng.uniform();
        s[j] = gap[j] > 0.0 ? -std::log1p(-u * one_minus_exp[j]) / gap[j] : u;
        tail += s[j];
      }
      if (tail < 1.0) {
        s[0] = 1.0 - tail;
        break;
      }
    }
    CVector w(q);
    for (int j = 0; j < q; ++j) {
      const double theta = kTwoPi * rng.uniform();
      w[j] = std::sqrt(s[j]) * Complex(std::cos(theta), std::sin(theta));
    }
    out.push_back(dec.vectors * w);
  }
  return out;
}

namespace {

double frame_watson_logf(const Matrix& x, const FrameWatsonParams& p) {
  double v = 0.0;
  for (int j = 0; j < 3; ++j) {
    const double c = x.col(j).dot(p.mode.col(j));
    v += p.kappas[j] * c * c;
  }
  return v;
}

void apply_givens_right(Matrix& x, int a, int b, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  const Vector va = x.col(a), vb = x.col(b);
  x.col(a) = c * va + s * vb;
  x.col(b) = -s * va + c * vb;
}

double lag1_autocorr(const std::vector<double>& series, int lag) {
  const int n = static_cast<int>(series.size()) - lag;
  if (n < 8) return 1.0;
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(series.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double d = series[i] - mean;
    den += d * d;
    if (i + static_cast<std::size_t>(lag) < series.size())
      num += d * (series[i + static_cast<std::size_t>(lag)] - mean);
  }
  return den > 0.0 ? num / den : 0.0;
}

struct MhChain {
  Matrix x;
  double logf;
  double sigma;
  long proposed = 0, accepted = 0;

  void step(const FrameWatsonParams& p, Pcg64& rng) {
    static const int kPairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    const int* pair = kPairs[rng.uniform_int(3)];
    const double theta = sigma * rng.normal();
    Matrix prop = x;
    apply_givens_right(prop, pair[0], pair[1], theta);
    const double lf = frame_watson_logf(prop, p);
    ++proposed;
    if (lf >= logf || rng.uniform() < std::exp(lf - logf)) {
      x = std::move(prop);
      logf = lf;
      ++accepted;
    }
  }
};

}  // namespace

std::vector<ProjStiefelPoint> sample_frame_watson(
    const FrameWatsonParams& params, int n, Pcg64& rng,
    const FrameWatsonOptions& opts) {
  detail::require(n >= 0, "sample_frame_watson: n >= 0");
  detail::require(params.mode.rows() == 3 && params.mode.cols() == 3,
                  "sample_frame_watson: mode must be 3x3");
  detail::require(StiefelPoint{params.mode}.valid(1e-8),
                  "sample_frame_watson: mode frame not orthonormal");

  MhChain chain;
  // Start at the mode, adjusted into the rotation group.
  chain.x = params.mode;
  if (chain.x.determinant() < 0.0) chain.x.col(2) = -chain.x.col(2);
  chain.logf = frame_watson_logf(chain.x, params);
  const double kmax = params.kappas.cwiseAbs().maxCoeff();
  chain.sigma = 0.5 / std::sqrt(kmax + 1.0);

  // Burn-in with step-size adaptation toward a 0.2-0.5 acceptance rate.
  long window_prop = 0, window_acc = 0;
  for (int t = 0; t < opts.burn_in; ++t) {
    const long before = chain.accepted;
    chain.step(params, rng);
    ++window_prop;
    window_acc += chain.accepted - before;
    if (window_prop == 100) {
      const double rate = static_cast<double>(window_acc) / 100.0;
      if (rate > 0.5) chain.sigma *= 1.5;
      if (rate < 0.2) chain.sigma /= 1.5;
      window_prop = window_acc = 0;
    }
  }

  // Pilot run to pick the thinning from the log-density autocorrelation.
  const int pilot_len = 1000;
  std::vector<double> pilot;
  pilot.reserve(static_cast<std::size_t>(pilot_len));
  for (int t = 0; t < pilot_len; ++t) {
    chain.step(params, rng);
    pilot.push_back(chain.logf);
  }
  int thin = 1;
  while (thin < opts.max_thinning &&
         lag1_autocorr(pilot, thin) >= opts.target_lag1_autocorr)
    thin *= 2;

  std::vector<ProjStiefelPoint> out;
  out.reserve(static_cast<std::size_t>(n));
  long steps_since_fix = 0;
  for (int i = 0; i < n; ++i) {
    for (int t = 0; t < thin; ++t) {
      chain.step(params, rng);
      if (++steps_since_fix >= 1000) {
        // Re-orthonormalize occasionally to stop roundoff drift.
        chain.x = project_stiefel(chain.x).x;
        chain.logf = frame_watson_logf(chain.x, params);
        steps_since_fix = 0;
      }
    }
    out.push_back(ProjStiefelPoint::canonical(chain.x));
  }

  if (chain.proposed > 0 &&
      static_cast<double>(chain.accepted) / static_cast<double>(chain.proposed) <
          0.02)
    throw SamplerStalled("sample_frame_watson: chain acceptance rate below 2%");
  return out;
}

CVector shape_outlier(const CVector& z0, Pcg64& rng) {
  detail::require(z0.size() >= 2, "shape_outlier: dimension >= 2");
  const CVector u = z0 / z0.norm();
  for (int tries = 0; tries < 64; ++tries) {
    CVector g(z0.size());
    for (int i = 0; i < g.size(); ++i) g[i] = rng.cnormal();
    CVector v = g - u * (u.dot(g));
    const double norm = v.norm();
    if (norm > 1e-8) return v / norm;
  }
  throw SamplerStalled("shape_outlier: degenerate projections");
}

ProjStiefelPoint frame_outlier() {
  const double s3 = std::sqrt(3.0);
  Matrix m(3, 3);
  m.col(0) = Eigen::Vector3d(1.0, 1.0, 1.0) / s3;
  m.col(1) = Eigen::Vector3d(-2.0 * s3, s3 + 3.0, s3 - 3.0) / 6.0;
  m.col(2) = Eigen::Vector3d(-2.0 * s3, s3 - 3.0, s3 + 3.0) / 6.0;
  return ProjStiefelPoint::canonical(std::move(m));
}

Matrix random_orthogonal(int k, Pcg64& rng) {
  Matrix g(k, k);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < k; ++i) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < k; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

CMatrix random_unitary(int k, Pcg64& rng) {
  CMatrix g(k, k);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < k; ++i) g(i, j) = rng.cnormal();
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < k; ++j) {
    const Complex d = r(j, j);
    const double m = std::abs(d);
    if (m > 0.0) q.col(j) *= d / m;
  }
  return q;
}

Vector random_unit_vector(int k, Pcg64& rng) {
  for (;;) {
    Vector g(k);
    for (int i = 0; i < k; ++i) g[i] = rng.normal();
    const double n = g.norm();
    if (n > 1e-12) return g / n;
  }
}

CVector random_complex_unit_vector(int k, Pcg64& rng) {
  for (;;) {
    CVector g(k);
    for (int i = 0; i < k; ++i) g[i] = rng.cnormal();
    const double n = g.norm();
    if (n > 1e-12) return g / n;
  }
}

StiefelPoint random_stiefel(int k, int r, Pcg64& rng) {
  const Matrix q = random_orthogonal(k, rng);
  return StiefelPoint{q.leftCols(r)};
}

}  // namespace pfm
