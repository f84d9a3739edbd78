// Regenerates the bundled sample moment-tensor catalogue
// (data/moment_tensors_region2.csv). Deterministic: a fixed seed produces the
// committed file byte-for-byte.
//
// Region 2 holds 21 events: 17 clustered around a fixed axial frame plus 4
// rotated-away outliers (EQ004, EQ009, EQ014, EQ019). Region 5 holds 5 more
// events around a different frame, one of which carries a non-negligible
// trace so ingestion warnings can be exercised.

#include "pfm/experiments.hpp"

#include <cstdio>
#include <string>
#include <vector>

namespace {

using pfm::Matrix;

Matrix rotation(const Eigen::Vector3d& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

// Moment tensor with the given eigen-axes and descending eigenvalues.
Matrix tensor_from_frame(const Matrix& frame, const Eigen::Vector3d& evals) {
  return frame * evals.asDiagonal() * frame.transpose();
}

// Trace-free descending eigenvalues with comfortable spectral gaps.
Eigen::Vector3d random_eigenvalues(pfm::Pcg64& rng) {
  const double scale = std::exp(0.5 * rng.normal());
  const double l1 = scale * (1.0 + 0.4 * rng.uniform());
  const double l2 = scale * (-0.2 + 0.5 * rng.uniform());
  return Eigen::Vector3d(l1, l2, -l1 - l2);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string out =
      argc > 1 ? argv[1] : "data/moment_tensors_region2.csv";

  pfm::Pcg64 rng(0xDA7A5E7, 0);

  // Cluster mode: the axial frame the region-2 events concentrate around.
  Matrix raw(3, 3);
  raw << 0.384, 0.705, 0.596, -0.477, 0.704, -0.526, -0.791, -0.082, 0.607;
  const Matrix mode2 = pfm::project_stiefel(raw).x;  // orthonormalized

  pfm::FrameWatsonParams params;
  params.kappas = Eigen::Vector3d(20, 15, 10);
  params.mode = mode2;
  std::vector<pfm::ProjStiefelPoint> clean =
      pfm::sample_frame_watson(params, 17, rng);

  // Outlier frames: the mode rotated far away, roughly symmetrically placed.
  const std::vector<Matrix> outliers = {
      rotation(Eigen::Vector3d(1, 0.2, 0), 0.95) * mode2,
      rotation(Eigen::Vector3d(0, 1, 0.3), 1.05) * mode2,
      rotation(Eigen::Vector3d(-1, 0.1, 0.2), 1.00) * mode2,
      rotation(Eigen::Vector3d(0.2, -1, 0.4), 1.10) * mode2,
  };

  std::vector<pfm::MomentTensorRecord> records;
  int clean_used = 0, outlier_used = 0;
  for (int i = 1; i <= 21; ++i) {
    pfm::MomentTensorRecord rec;
    char id[16];
    std::snprintf(id, sizeof id, "EQ%03d", i);
    rec.event_id = id;
    rec.region = "2";
    const bool is_outlier = (i == 4 || i == 9 || i == 14 || i == 19);
    const Matrix frame =
        is_outlier ? outliers[static_cast<std::size_t>(outlier_used++)]
                   : clean[static_cast<std::size_t>(clean_used++)].x;
    rec.m = tensor_from_frame(frame, random_eigenvalues(rng));
    records.push_back(std::move(rec));
  }

  // A second, smaller region for filter tests.
  Matrix raw5(3, 3);
  raw5 << 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0;
  params.mode = pfm::project_stiefel(raw5).x;
  params.kappas = Eigen::Vector3d(25, 25, 25);
  std::vector<pfm::ProjStiefelPoint> region5 =
      pfm::sample_frame_watson(params, 5, rng);
  for (int i = 0; i < 5; ++i) {
    pfm::MomentTensorRecord rec;
    char id[16];
    std::snprintf(id, sizeof id, "EQ1%02d", i + 1);
    rec.event_id = id;
    rec.region = "5";
    rec.m = tensor_from_frame(region5[static_cast<std::size_t>(i)].x,
                              random_eigenvalues(rng));
    // One event keeps a visible isotropic component to exercise the
    // trace-magnitude warning.
    if (i == 2) rec.m += 0.15 * rec.m.norm() * Matrix::Identity(3, 3);
    records.push_back(std::move(rec));
  }

  pfm::write_moment_tensors(out, records);
  std::printf("wrote %s (%zu records)\n", out.c_str(), records.size());
  return 0;
}
