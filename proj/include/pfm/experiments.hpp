#pragma once

#include "pfm/baselines.hpp"
#include "pfm/bootstrap.hpp"
#include "pfm/manifolds.hpp"
#include "pfm/samplers.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pfm {

// ---------------------------------------------------------------------------
// Declarative experiment configuration. Parsed from a JSON document validated
// against docs/config_schema.json; unknown keys are rejected so typos fail
// loudly (ParseError) rather than silently running a default.
// ---------------------------------------------------------------------------

struct OutputSpec {
  std::string dir = "out";
  std::vector<std::string> formats = {"csv"};  // csv | json | svg
};

// Tangent-plane confidence-ellipse add-on for the frame simulation: one extra
// dataset is drawn from the requested case/contamination, the axial median is
// bootstrapped, and the per-axis pivotal ellipses are emitted.
struct EllipseSpec {
  bool enabled = false;
  int case_index = 1;   // 1-based index into kappa_cases
  int n_outliers = 5;
  int b = 200;
  double level = 0.95;
};

struct ExperimentConfig {
  int schema_version = 1;
  std::string scenario;  // shape-table | frame-table | earthquake
  int n = 0;             // sample size per replicate (0 = scenario default)
  int replicates = 100;  // 0 = dry run: emit the planned grid only
  std::uint64_t seed = 20260101;

  // shape-table
  std::vector<int> shapes = {1, 2, 3};
  std::vector<int> outliers;            // contamination counts (grid axis)
  std::vector<std::string> estimators;  // scenario-specific names

  // frame-table
  std::vector<Eigen::Vector3d> kappa_cases;
  EllipseSpec ellipses;

  // earthquake
  std::string data_path = "data/moment_tensors_region2.csv";
  std::string region = "2";
  std::vector<std::string> variants = {"full", "sub", "cont"};
  // Event ids of the four suspected outliers, in figure-label order 1..4;
  // "sub" drops labels 1 and 3, "cont" additionally duplicates 2 and 4 twice.
  std::vector<std::string> suspected_outliers;
  int bootstrap_b = 1000;
  double level = 0.95;

  OutputSpec output;

  static ExperimentConfig shape_defaults();
  static ExperimentConfig frame_defaults();
  static ExperimentConfig earthquake_defaults();

  // Strict parse starting from the scenario's defaults. Throws ParseError on
  // malformed JSON / unknown keys, InvalidInput on out-of-contract values.
  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_json_file(const std::string& path);

  // Paper-scale replicate counts (shape 500, frame 1000).
  void apply_full_scale();
  void validate() const;
};

// ---------------------------------------------------------------------------
// Shape-space simulation (complex Bingham + orthogonal outliers + four
// estimators; Table-1 layout).
// ---------------------------------------------------------------------------

struct ShapeCell {
  int shape_id = 0;
  int k = 0;  // landmark count of the configuration
  int n = 0;
  int n_outliers = 0;
  std::string estimator;
  double median_error = 0.0;  // NaN when no replicate succeeded
  double sd_error = 0.0;
  int replicates_done = 0;
  int failures = 0;
  std::vector<int> replicate_ids;  // successes, ascending
  std::vector<double> errors;      // aligned with replicate_ids
};

struct ShapeExperimentReport {
  ExperimentConfig config;
  std::vector<ShapeCell> cells;
  double elapsed_seconds = 0.0;  // console diagnostics only; never serialized
};

ShapeExperimentReport run_shape_experiment(const ExperimentConfig& config);

// The three landmark configurations of the shape study and their pre-shapes.
CVector shape_configuration(int shape_id);  // complex landmark vector
CVector shape_population_preshape(int shape_id);
double shape_concentration(int shape_id);  // leading Bingham eigenvalue

// ---------------------------------------------------------------------------
// Axial-frame simulation (frame Watson + fixed contaminating frame + the mean
// and median estimators; Table-2 layout).
// ---------------------------------------------------------------------------

struct FrameCell {
  int case_index = 0;  // 1-based
  Eigen::Vector3d kappa = Eigen::Vector3d::Zero();
  int n = 0;
  int n_outliers = 0;
  std::string estimator;
  Eigen::Vector3d mean_error = Eigen::Vector3d::Zero();
  Eigen::Vector3d sd_error = Eigen::Vector3d::Zero();
  int replicates_done = 0;
  int failures = 0;
  std::vector<int> replicate_ids;
  std::vector<Eigen::Vector3d> errors;  // per-axis angular errors
};

struct FrameExperimentReport {
  ExperimentConfig config;
  std::vector<FrameCell> cells;
  std::optional<PivotalEllipseReport> ellipse;  // EllipseSpec add-on
  double elapsed_seconds = 0.0;
};

FrameExperimentReport run_frame_experiment(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Moment-tensor analysis (CSV ingestion, T/B/P frame extraction, mean/median
// estimates with bootstrap standard errors and pivotal ellipses).
// ---------------------------------------------------------------------------

struct MomentTensorRecord {
  std::string event_id;
  Matrix m;  // 3x3 symmetric
  std::string region;
  int line = 0;  // 1-based source line, for diagnostics
  double trace_ratio() const;  // |tr M| / ||M||_F (0 for the zero matrix)
};

// CSV schema (exact): header `event_id,m11,m22,m33,m12,m13,m23,region`,
// UTF-8, '.' decimal separator, one record per line. Throws ParseError with
// line/column context on malformed input.
std::vector<MomentTensorRecord> ingest_moment_tensors(const std::string& path);
void write_moment_tensors(const std::string& path,
                          const std::vector<MomentTensorRecord>& records);

// Eigen-axes ordered by descending eigenvalue: columns (t, b, p). Throws
// DegenerateSpectrum when consecutive eigenvalues are closer than 1e-10
// relative to the spectral radius.
ProjStiefelPoint extract_tbp_frame(const MomentTensorRecord& record);

struct QuakeEstimateRow {
  std::string variant;    // full | sub | cont
  std::string estimator;  // mean | median
  int n_events = 0;
  Matrix axes;  // 3x3, columns T, B, P (canonical signs)
  Eigen::Vector3d se = Eigen::Vector3d::Zero();
  int bootstrap_failures = 0;
};

struct QuakeReport {
  ExperimentConfig config;
  int n_region = 0;  // events after the region filter
  std::vector<std::string> warnings;
  std::vector<QuakeEstimateRow> rows;
  // Median pivotal ellipses per variant (present when "median" is requested).
  std::vector<std::pair<std::string, PivotalEllipseReport>> median_ellipses;
  std::vector<MomentTensorRecord> region_records;  // post-filter, pre-edit
  double elapsed_seconds = 0.0;
};

QuakeReport run_earthquake_analysis(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Deterministic emission: CSV tables with pinned column order, a
// schema-versioned JSON report, and optional SVG plots. Returns the written
// paths. Timing fields never reach the files, so byte-identical outputs
// follow from (config, seed) alone.
// ---------------------------------------------------------------------------

std::vector<std::string> emit_outputs(const ShapeExperimentReport& report);
std::vector<std::string> emit_outputs(const FrameExperimentReport& report);
std::vector<std::string> emit_outputs(const QuakeReport& report);

}  // namespace pfm
