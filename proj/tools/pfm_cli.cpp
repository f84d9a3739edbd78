// Command-line front end: desk-scale reproductions of the shape / frame
// simulation tables, the moment-tensor analysis, and a micro-benchmark.
// Exit codes: 0 success, 2 configuration error, 3 runtime failure.

#include "pfm/experiments.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>

namespace {

struct CommonFlags {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int replicates = -1;
  std::string out_dir;
  std::vector<std::string> formats;
  bool full_scale = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path,
                  "JSON experiment config (see docs/config_schema.json); "
                  "defaults are used when omitted");
  cmd->add_option("--seed", f.seed, "base RNG seed (PCG64 seed value)")
      ->each([&f](const std::string&) { f.seed_set = true; });
  cmd->add_option("--replicates", f.replicates,
                  "Monte Carlo replicates (0 = dry run: emit the grid only)");
  cmd->add_option("--out", f.out_dir, "output directory");
  cmd->add_option("--format", f.formats, "output formats: csv, json, svg")
      ->delimiter(',');
  cmd->add_flag("--full-scale", f.full_scale,
                "paper-scale replicate counts (500 shape / 1000 frame)");
}

pfm::ExperimentConfig resolve_config(const std::string& scenario,
                                     const CommonFlags& f) {
  pfm::ExperimentConfig cfg;
  if (!f.config_path.empty()) {
    cfg = pfm::ExperimentConfig::from_json_file(f.config_path);
    if (cfg.scenario != scenario)
      throw pfm::InvalidInput("config scenario '" + cfg.scenario +
                              "' does not match this subcommand (expects '" +
                              scenario + "')");
  } else if (scenario == "shape-table") {
    cfg = pfm::ExperimentConfig::shape_defaults();
  } else if (scenario == "frame-table") {
    cfg = pfm::ExperimentConfig::frame_defaults();
  } else {
    cfg = pfm::ExperimentConfig::earthquake_defaults();
  }
  if (f.full_scale) cfg.apply_full_scale();
  if (f.seed_set) cfg.seed = f.seed;
  if (f.replicates >= 0) cfg.replicates = f.replicates;
  if (!f.out_dir.empty()) cfg.output.dir = f.out_dir;
  if (!f.formats.empty()) cfg.output.formats = f.formats;
  cfg.validate();
  return cfg;
}

void print_written(const std::vector<std::string>& paths, double seconds) {
  for (const auto& p : paths) std::cout << "wrote " << p << "\n";
  std::printf("elapsed: %.2f s\n", seconds);
}

int run_bench(std::uint64_t seed) {
  using clock = std::chrono::steady_clock;
  const auto ms = [](clock::time_point a, clock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
  };
  pfm::Pcg64 rng(seed, 0);

  {
    std::vector<pfm::CVector> draws;
    pfm::ComplexBinghamParams params;
    pfm::CVector z0(3);
    z0 << 1.0, 0.0, 0.0;
    params.lambda = 150.0 * (z0 * z0.adjoint());
    const auto t0 = clock::now();
    draws = pfm::sample_complex_bingham(params, 10000, rng);
    const auto t1 = clock::now();
    std::printf("complex Bingham sampler     %8.2f ms / 10000 draws\n",
                ms(t0, t1));

    std::vector<pfm::CPPoint> pts;
    for (int i = 0; i < 200; ++i)
      pts.push_back(pfm::CPPoint::from_vector(draws[static_cast<std::size_t>(i)]));
    const auto t2 = clock::now();
    const auto est = pfm::pfm(pts);
    const auto t3 = clock::now();
    std::printf("shape median (n=200)        %8.2f ms (%d iterations)\n",
                ms(t2, t3), est.ambient.iterations);
  }

  {
    pfm::FrameWatsonParams params;
    params.kappas = Eigen::Vector3d(5, 5, 5);
    params.mode = pfm::Matrix::Identity(3, 3);
    const auto t0 = clock::now();
    const auto frames = pfm::sample_frame_watson(params, 50, rng);
    const auto t1 = clock::now();
    std::printf("frame Watson sampler        %8.2f ms / 50 draws\n",
                ms(t0, t1));

    const auto t2 = clock::now();
    const auto med = pfm::pfm_proj_stiefel(frames);
    const auto t3 = clock::now();
    std::printf("frame median (n=50)         %8.2f ms (%d iterations)\n",
                ms(t2, t3), med.ambient.iterations);

    const auto t4 = clock::now();
    const auto mean = pfm::frame_mean_axial(frames);
    const auto t5 = clock::now();
    std::printf("frame mean (n=50)           %8.2f ms (%d iterations)\n",
                ms(t4, t5), mean.iterations);

    const pfm::FrameEstimator fn =
        [](const std::vector<pfm::ProjStiefelPoint>& d) {
          return pfm::pfm_proj_stiefel(d).point;
        };
    const auto t6 = clock::now();
    const auto boot =
        pfm::bootstrap_frames(frames, fn, 50, pfm::RngSeed{seed, 1});
    const auto t7 = clock::now();
    std::printf("frame bootstrap (B=50)      %8.2f ms (%d failures)\n",
                ms(t6, t7), boot.failures);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Projected-median estimators on matrix manifolds: simulation tables, "
      "moment-tensor analysis, benchmarks"};
  app.require_subcommand(1);

  CommonFlags shape_flags, frame_flags, quake_flags;
  std::uint64_t bench_seed = 1;

  CLI::App* shape = app.add_subcommand(
      "shape-sim",
      "Planar-shape simulation: complex Bingham data with orthogonal "
      "outliers; EMedian / IMean / IMedian / MoM error table");
  add_common(shape, shape_flags);

  CLI::App* frame = app.add_subcommand(
      "frame-sim",
      "Axial-frame simulation: frame Watson data with a fixed contaminating "
      "frame; mean / median per-axis error table, optional bootstrap "
      "ellipses");
  add_common(frame, frame_flags);

  CLI::App* quake = app.add_subcommand(
      "quake",
      "Moment-tensor analysis. Input CSV header (exact): "
      "event_id,m11,m22,m33,m12,m13,m23,region; UTF-8, '.' decimal "
      "separator. Emits T/B/P axes with bootstrap SEs and pivotal "
      "confidence ellipses");
  add_common(quake, quake_flags);

  CLI::App* bench = app.add_subcommand(
      "bench", "Micro-benchmarks of the core estimators (console only)");
  bench->add_option("--seed", bench_seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (shape->parsed()) {
      pfm::ExperimentConfig cfg;
      try {
        cfg = resolve_config("shape-table", shape_flags);
      } catch (const pfm::Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
      }
      const auto report = pfm::run_shape_experiment(cfg);
      print_written(pfm::emit_outputs(report), report.elapsed_seconds);
      return 0;
    }
    if (frame->parsed()) {
      pfm::ExperimentConfig cfg;
      try {
        cfg = resolve_config("frame-table", frame_flags);
      } catch (const pfm::Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
      }
      const auto report = pfm::run_frame_experiment(cfg);
      print_written(pfm::emit_outputs(report), report.elapsed_seconds);
      return 0;
    }
    if (quake->parsed()) {
      pfm::ExperimentConfig cfg;
      try {
        cfg = resolve_config("earthquake", quake_flags);
      } catch (const pfm::Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
      }
      const auto report = pfm::run_earthquake_analysis(cfg);
      for (const auto& w : report.warnings)
        std::cerr << "warning: " << w << "\n";
      print_written(pfm::emit_outputs(report), report.elapsed_seconds);
      return 0;
    }
    if (bench->parsed()) return run_bench(bench_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
