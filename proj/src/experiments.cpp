#include "pfm/experiments.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

namespace pfm {
namespace {

using nlohmann::ordered_json;

constexpr const char* kMomentTensorHeader =
    "event_id,m11,m22,m33,m12,m13,m23,region";

// ---------------------------------------------------------------------------
// small numeric / formatting helpers
// ---------------------------------------------------------------------------

double quiet_nan() { return std::numeric_limits<double>::quiet_NaN(); }

double median_of(std::vector<double> v) {
  if (v.empty()) return quiet_nan();
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double sd_of(const std::vector<double>& v) {
  if (v.size() < 2) return v.empty() ? quiet_nan() : 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

// Linear-interpolation sample quantile on sorted data.
double quantile_sorted(const std::vector<double>& v, double q) {
  if (v.empty()) return quiet_nan();
  const double h = q * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

// Shortest exact decimal form of a double: round-trips bit-exactly through
// strtod, so emitted CSV files re-ingest to identical matrices.
std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fixed2(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path);
  out << content;
  if (!out) throw Error("write failed: " + path);
}

// ---------------------------------------------------------------------------
// replicate worker pool: items claim indices off an atomic counter, results
// land in per-index slots, so scheduling never affects the aggregate.
// ---------------------------------------------------------------------------

void parallel_for(int n, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  const unsigned hw = std::thread::hardware_concurrency();
  const int workers = std::min(n, static_cast<int>(hw == 0 ? 1 : hw));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> counter{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = counter.fetch_add(1); i < n; i = counter.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::uint64_t cell_stream(int cell_ordinal, int replicate) {
  return (static_cast<std::uint64_t>(cell_ordinal) << 32) |
         static_cast<std::uint64_t>(replicate);
}

// ---------------------------------------------------------------------------
// config parsing
// ---------------------------------------------------------------------------

void expect_keys(const ordered_json& j, const std::set<std::string>& known,
                 const std::string& where) {
  for (const auto& item : j.items()) {
    if (known.find(item.key()) == known.end())
      throw ParseError("config: unknown key '" + item.key() + "' in " + where);
  }
}

int read_int(const ordered_json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer())
    throw ParseError(std::string("config: '") + key + "' must be an integer");
  return j.at(key).get<int>();
}

double read_double(const ordered_json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number())
    throw ParseError(std::string("config: '") + key + "' must be a number");
  return j.at(key).get<double>();
}

bool read_bool(const ordered_json& j, const char* key, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean())
    throw ParseError(std::string("config: '") + key + "' must be a boolean");
  return j.at(key).get<bool>();
}

std::string read_string(const ordered_json& j, const char* key,
                        const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string())
    throw ParseError(std::string("config: '") + key + "' must be a string");
  return j.at(key).get<std::string>();
}

std::vector<int> read_int_list(const ordered_json& j, const char* key,
                               std::vector<int> fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_array())
    throw ParseError(std::string("config: '") + key + "' must be an array");
  std::vector<int> out;
  for (const auto& e : j.at(key)) {
    if (!e.is_number_integer())
      throw ParseError(std::string("config: '") + key +
                       "' entries must be integers");
    out.push_back(e.get<int>());
  }
  return out;
}

std::vector<std::string> read_string_list(const ordered_json& j,
                                          const char* key,
                                          std::vector<std::string> fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_array())
    throw ParseError(std::string("config: '") + key + "' must be an array");
  std::vector<std::string> out;
  for (const auto& e : j.at(key)) {
    if (!e.is_string())
      throw ParseError(std::string("config: '") + key +
                       "' entries must be strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

template <typename Names>
void require_subset(const std::vector<std::string>& values, const Names& names,
                    const char* what) {
  for (const auto& v : values) {
    if (std::find(std::begin(names), std::end(names), v) == std::end(names))
      throw InvalidInput(std::string("config: unknown ") + what + " '" + v +
                         "'");
  }
}

// ---------------------------------------------------------------------------
// shape scenario internals
// ---------------------------------------------------------------------------

struct ShapeScenario {
  int shape_id = 0;
  int k = 0;
  CVector z0;
  ComplexBinghamParams bingham;
};

ShapeScenario make_shape_scenario(int shape_id) {
  ShapeScenario s;
  s.shape_id = shape_id;
  s.z0 = shape_population_preshape(shape_id);
  s.k = static_cast<int>(s.z0.size()) + 1;
  // Only the leading eigenvalue is nonzero, so the Hermitian parameter matrix
  // is concentration * z0 z0^*, independent of how the orthogonal complement
  // is completed.
  s.bingham.lambda = shape_concentration(shape_id) * (s.z0 * s.z0.adjoint());
  return s;
}

double run_shape_estimator(const std::string& name,
                           const std::vector<CVector>& data,
                           const CVector& z0, const CVector& init,
                           Pcg64& rng) {
  if (name == "EMedian") {
    std::vector<CPPoint> pts;
    pts.reserve(data.size());
    for (const auto& x : data) pts.push_back(CPPoint::from_vector(x));
    const CPPoint est = pfm(pts).point;
    return angular_error(est.representative(), z0);
  }
  if (name == "IMean")
    return angular_error(frechet_mean_cp(data, init).z, z0);
  if (name == "IMedian")
    return angular_error(frechet_median_cp(data, init).z, z0);
  if (name == "MoM")
    return angular_error(median_of_means_cp(data, 7, init, rng).z, z0);
  throw InvalidInput("unknown shape estimator '" + name + "'");
}

// ---------------------------------------------------------------------------
// SVG primitives
// ---------------------------------------------------------------------------

class SvgCanvas {
 public:
  SvgCanvas(double width, double height) : width_(width), height_(height) {}

  void line(double x1, double y1, double x2, double y2,
            const std::string& stroke, double stroke_width = 1.0) {
    body_ << "  <line x1=\"" << fixed2(x1) << "\" y1=\"" << fixed2(y1)
          << "\" x2=\"" << fixed2(x2) << "\" y2=\"" << fixed2(y2)
          << "\" stroke=\"" << stroke << "\" stroke-width=\""
          << fixed2(stroke_width) << "\"/>\n";
  }

  void rect(double x, double y, double w, double h, const std::string& fill,
            const std::string& stroke) {
    body_ << "  <rect x=\"" << fixed2(x) << "\" y=\"" << fixed2(y)
          << "\" width=\"" << fixed2(w) << "\" height=\"" << fixed2(h)
          << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\"/>\n";
  }

  void circle(double cx, double cy, double r, const std::string& fill) {
    body_ << "  <circle cx=\"" << fixed2(cx) << "\" cy=\"" << fixed2(cy)
          << "\" r=\"" << fixed2(r) << "\" fill=\"" << fill << "\"/>\n";
  }

  void polyline(const std::vector<std::pair<double, double>>& pts,
                const std::string& stroke, double stroke_width = 1.0) {
    body_ << "  <polyline fill=\"none\" stroke=\"" << stroke
          << "\" stroke-width=\"" << fixed2(stroke_width) << "\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) body_ << ' ';
      body_ << fixed2(pts[i].first) << ',' << fixed2(pts[i].second);
    }
    body_ << "\"/>\n";
  }

  void text(double x, double y, const std::string& s, int size = 11,
            const std::string& anchor = "start") {
    body_ << "  <text x=\"" << fixed2(x) << "\" y=\"" << fixed2(y)
          << "\" font-family=\"sans-serif\" font-size=\"" << size
          << "\" text-anchor=\"" << anchor << "\">" << s << "</text>\n";
  }

  std::string finish() const {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
        << fixed2(width_) << "\" height=\"" << fixed2(height_)
        << "\" viewBox=\"0 0 " << fixed2(width_) << ' ' << fixed2(height_)
        << "\">\n"
        << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << body_.str() << "</svg>\n";
    return out.str();
  }

 private:
  double width_;
  double height_;
  std::ostringstream body_;
};

// Boxplot of log10 errors, one box per estimator.
std::string boxplot_svg(const std::string& title,
                        const std::vector<std::string>& labels,
                        const std::vector<std::vector<double>>& groups) {
  const double w = 480.0, h = 360.0;
  const double left = 64.0, right = 16.0, top = 32.0, bottom = 48.0;
  SvgCanvas svg(w, h);

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> logs(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (double e : groups[g]) {
      const double v = std::log10(std::max(e, 1e-300));
      logs[g].push_back(v);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    std::sort(logs[g].begin(), logs[g].end());
  }
  if (!(lo < hi)) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;

  const double plot_w = w - left - right, plot_h = h - top - bottom;
  const auto ypix = [&](double v) {
    return top + plot_h * (hi - v) / (hi - lo);
  };

  svg.text(w / 2.0, 20.0, title, 12, "middle");
  svg.line(left, top, left, top + plot_h, "black");
  svg.line(left, top + plot_h, left + plot_w, top + plot_h, "black");
  // y ticks at integer log10 values
  for (int t = static_cast<int>(std::ceil(lo)); t <= static_cast<int>(std::floor(hi)); ++t) {
    const double y = ypix(t);
    svg.line(left - 4.0, y, left, y, "black");
    svg.text(left - 8.0, y + 4.0, "1e" + std::to_string(t), 10, "end");
  }

  const double slot = plot_w / static_cast<double>(std::max<std::size_t>(groups.size(), 1));
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const double cx = left + slot * (static_cast<double>(g) + 0.5);
    svg.text(cx, h - 20.0, labels[g], 11, "middle");
    const auto& v = logs[g];
    if (v.empty()) continue;
    const double q1 = quantile_sorted(v, 0.25);
    const double q2 = quantile_sorted(v, 0.50);
    const double q3 = quantile_sorted(v, 0.75);
    const double iqr = q3 - q1;
    double wlo = v.front(), whi = v.back();
    for (double x : v) {
      if (x >= q1 - 1.5 * iqr) {
        wlo = x;
        break;
      }
    }
    for (auto it = v.rbegin(); it != v.rend(); ++it) {
      if (*it <= q3 + 1.5 * iqr) {
        whi = *it;
        break;
      }
    }
    const double bw = slot * 0.5;
    svg.rect(cx - bw / 2.0, ypix(q3), bw, ypix(q1) - ypix(q3), "none", "black");
    svg.line(cx - bw / 2.0, ypix(q2), cx + bw / 2.0, ypix(q2), "black", 1.5);
    svg.line(cx, ypix(q1), cx, ypix(wlo), "black");
    svg.line(cx, ypix(q3), cx, ypix(whi), "black");
    svg.line(cx - bw / 4.0, ypix(wlo), cx + bw / 4.0, ypix(wlo), "black");
    svg.line(cx - bw / 4.0, ypix(whi), cx + bw / 4.0, ypix(whi), "black");
    for (double x : v) {
      if (x < q1 - 1.5 * iqr || x > q3 + 1.5 * iqr)
        svg.circle(cx, ypix(x), 1.6, "black");
    }
  }
  return svg.finish();
}

// Ellipse boundary in tangent coordinates.
std::vector<std::pair<double, double>> ellipse_boundary(
    const Eigen::Matrix2d& second_moment, double radius2, int segments = 96) {
  std::vector<std::pair<double, double>> pts;
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> dec(second_moment);
  const Eigen::Vector2d s =
      (radius2 * dec.eigenvalues().cwiseMax(0.0)).cwiseSqrt();
  for (int i = 0; i <= segments; ++i) {
    const double a =
        2.0 * M_PI * static_cast<double>(i) / static_cast<double>(segments);
    const Eigen::Vector2d y =
        dec.eigenvectors() *
        Eigen::Vector2d(s[0] * std::cos(a), s[1] * std::sin(a));
    pts.emplace_back(y[0], y[1]);
  }
  return pts;
}

// Tangent-plane picture of one axis: confidence region boundary around the
// estimate (the origin) plus labelled reference points.
std::string axis_plane_svg(
    const std::string& title, const AxisEllipse& ellipse,
    const std::vector<std::pair<std::string, Eigen::Vector2d>>& marks,
    const std::vector<Eigen::Vector2d>& cloud) {
  const double w = 420.0, h = 420.0;
  SvgCanvas svg(w, h);
  const double cx = w / 2.0, cy = h / 2.0 + 10.0;

  double extent = 1e-3;
  std::vector<std::pair<double, double>> boundary;
  if (!ellipse.degenerate) {
    boundary = ellipse_boundary(ellipse.second_moment, ellipse.radius2);
    for (const auto& p : boundary) {
      extent = std::max(extent, std::abs(p.first));
      extent = std::max(extent, std::abs(p.second));
    }
  } else {
    extent = std::max({extent, ellipse.interval_halfwidth[0],
                       ellipse.interval_halfwidth[1]});
  }
  for (const auto& m : marks)
    extent = std::max({extent, std::abs(m.second[0]), std::abs(m.second[1])});
  for (const auto& p : cloud)
    extent = std::max({extent, std::abs(p[0]), std::abs(p[1])});
  extent *= 1.15;

  const double scale = (std::min(w, h) / 2.0 - 40.0) / extent;
  const auto X = [&](double v) { return cx + scale * v; };
  const auto Y = [&](double v) { return cy - scale * v; };

  svg.text(w / 2.0, 20.0, title, 12, "middle");
  svg.line(X(-extent), Y(0.0), X(extent), Y(0.0), "#cccccc");
  svg.line(X(0.0), Y(-extent), X(0.0), Y(extent), "#cccccc");
  svg.text(X(extent) - 4.0, Y(0.0) - 6.0,
           "scale: " + fixed2(extent) + " rad", 10, "end");

  for (const auto& p : cloud) svg.circle(X(p[0]), Y(p[1]), 2.0, "#999999");

  if (!ellipse.degenerate) {
    std::vector<std::pair<double, double>> px;
    px.reserve(boundary.size());
    for (const auto& p : boundary) px.emplace_back(X(p.first), Y(p.second));
    svg.polyline(px, "red", 1.5);
  } else {
    svg.rect(X(-ellipse.interval_halfwidth[0]), Y(ellipse.interval_halfwidth[1]),
             scale * 2.0 * ellipse.interval_halfwidth[0],
             scale * 2.0 * ellipse.interval_halfwidth[1], "none", "red");
  }

  svg.circle(X(0.0), Y(0.0), 3.0, "red");
  double legend_y = 36.0;
  svg.text(12.0, legend_y, "red dot: estimate; red curve: confidence region",
           10);
  for (const auto& m : marks) {
    legend_y += 14.0;
    svg.circle(X(m.second[0]), Y(m.second[1]), 3.0, "blue");
    svg.text(X(m.second[0]) + 6.0, Y(m.second[1]) + 4.0, m.first, 10);
  }
  return svg.finish();
}

// ---------------------------------------------------------------------------
// JSON assembly
// ---------------------------------------------------------------------------

ordered_json config_json(const ExperimentConfig& c) {
  ordered_json j;
  j["schema_version"] = c.schema_version;
  j["scenario"] = c.scenario;
  j["seed"] = c.seed;
  j["replicates"] = c.replicates;
  if (c.scenario == "shape-table") {
    j["n"] = c.n;
    j["shapes"] = c.shapes;
    j["outliers"] = c.outliers;
    j["estimators"] = c.estimators;
  } else if (c.scenario == "frame-table") {
    j["n"] = c.n;
    ordered_json cases = ordered_json::array();
    for (const auto& k : c.kappa_cases)
      cases.push_back(std::vector<double>{k[0], k[1], k[2]});
    j["kappa_cases"] = cases;
    j["outliers"] = c.outliers;
    j["estimators"] = c.estimators;
    j["ellipses"] = {{"enabled", c.ellipses.enabled},
                     {"case", c.ellipses.case_index},
                     {"outliers", c.ellipses.n_outliers},
                     {"b", c.ellipses.b},
                     {"level", c.ellipses.level}};
  } else {
    j["data"] = c.data_path;
    j["region"] = c.region;
    j["variants"] = c.variants;
    j["suspected_outliers"] = c.suspected_outliers;
    j["bootstrap_b"] = c.bootstrap_b;
    j["level"] = c.level;
    j["estimators"] = c.estimators;
  }
  // The output directory is deployment plumbing, not part of the experiment:
  // omitting it keeps reports byte-identical wherever they are written.
  j["output"] = {{"formats", c.output.formats}};
  return j;
}

ordered_json ellipse_json(const AxisEllipse& e) {
  ordered_json j;
  j["center_axis"] = {e.center_axis[0], e.center_axis[1], e.center_axis[2]};
  j["tangent_basis"] = {
      {e.tangent_basis(0, 0), e.tangent_basis(1, 0), e.tangent_basis(2, 0)},
      {e.tangent_basis(0, 1), e.tangent_basis(1, 1), e.tangent_basis(2, 1)}};
  j["second_moment"] = {e.second_moment(0, 0), e.second_moment(0, 1),
                        e.second_moment(1, 1)};
  j["radius2"] = e.radius2;
  j["degenerate"] = e.degenerate;
  j["interval_halfwidth"] = {e.interval_halfwidth[0], e.interval_halfwidth[1]};
  return j;
}

ordered_json ellipse_report_json(const PivotalEllipseReport& rep) {
  ordered_json j;
  j["level"] = rep.level;
  j["b_requested"] = rep.b_requested;
  j["b_effective"] = rep.b_effective;
  j["failures"] = rep.failures;
  ordered_json axes = ordered_json::array();
  for (const auto& ax : rep.axes) axes.push_back(ellipse_json(ax));
  j["axes"] = axes;
  return j;
}

std::string dump_json(const ordered_json& j) { return j.dump(2) + "\n"; }

// Written-path bookkeeping shared by the emitters.
std::string emit_file(std::vector<std::string>& written,
                      const std::string& dir, const std::string& name,
                      const std::string& content) {
  const std::string path = (std::filesystem::path(dir) / name).string();
  write_text_file(path, content);
  written.push_back(path);
  return path;
}

bool wants(const std::vector<std::string>& formats, const char* f) {
  return std::find(formats.begin(), formats.end(), f) != formats.end();
}

}  // namespace

// ---------------------------------------------------------------------------
// configuration
// ---------------------------------------------------------------------------

ExperimentConfig ExperimentConfig::shape_defaults() {
  ExperimentConfig c;
  c.scenario = "shape-table";
  c.n = 200;
  c.replicates = 100;
  c.shapes = {1, 2, 3};
  c.outliers = {20, 40, 90};
  c.estimators = {"EMedian", "IMean", "IMedian", "MoM"};
  return c;
}

ExperimentConfig ExperimentConfig::frame_defaults() {
  ExperimentConfig c;
  c.scenario = "frame-table";
  c.n = 50;
  c.replicates = 100;
  c.outliers = {0, 5, 15, 20};
  c.estimators = {"mean", "median"};
  // Default concentration cases 1-3. The values are the effective
  // concentrations fed directly into exp{sum_j kappa_j (x_j.m_j)^2}; the
  // nominal labels (5,5,5), (25,5,5), (50,25,5) map to these via 4*kappa^2.
  c.kappa_cases = {Eigen::Vector3d(100, 100, 100),
                   Eigen::Vector3d(2500, 100, 100),
                   Eigen::Vector3d(10000, 2500, 100)};
  return c;
}

ExperimentConfig ExperimentConfig::earthquake_defaults() {
  ExperimentConfig c;
  c.scenario = "earthquake";
  c.estimators = {"mean", "median"};
  c.suspected_outliers = {"EQ004", "EQ009", "EQ014", "EQ019"};
  return c;
}

void ExperimentConfig::apply_full_scale() {
  if (scenario == "shape-table") replicates = 500;
  if (scenario == "frame-table") replicates = 1000;
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("config: document must be an object");

  const std::string scenario = read_string(j, "scenario", "");
  ExperimentConfig c;
  if (scenario == "shape-table")
    c = shape_defaults();
  else if (scenario == "frame-table")
    c = frame_defaults();
  else if (scenario == "earthquake")
    c = earthquake_defaults();
  else
    throw ParseError("config: 'scenario' must be one of shape-table, "
                     "frame-table, earthquake");

  static const std::set<std::string> kKnown = {
      "schema_version", "scenario", "n",        "replicates",
      "seed",           "shapes",   "outliers", "estimators",
      "kappa_cases",    "ellipses", "data",     "region",
      "variants",       "suspected_outliers",   "bootstrap_b",
      "level",          "output"};
  expect_keys(j, kKnown, "the document root");

  c.schema_version = read_int(j, "schema_version", c.schema_version);
  if (c.schema_version != 1)
    throw ParseError("config: unsupported schema_version");
  c.n = read_int(j, "n", c.n);
  c.replicates = read_int(j, "replicates", c.replicates);
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_integer() || j.at("seed").get<long long>() < 0)
      throw ParseError("config: 'seed' must be a nonnegative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  c.shapes = read_int_list(j, "shapes", c.shapes);
  c.outliers = read_int_list(j, "outliers", c.outliers);
  c.estimators = read_string_list(j, "estimators", c.estimators);

  if (j.contains("kappa_cases")) {
    if (!j.at("kappa_cases").is_array())
      throw ParseError("config: 'kappa_cases' must be an array");
    c.kappa_cases.clear();
    for (const auto& e : j.at("kappa_cases")) {
      if (!e.is_array() || e.size() != 3 || !e[0].is_number() ||
          !e[1].is_number() || !e[2].is_number())
        throw ParseError(
            "config: each kappa case must be an array of 3 numbers");
      c.kappa_cases.emplace_back(e[0].get<double>(), e[1].get<double>(),
                                 e[2].get<double>());
    }
  }

  if (j.contains("ellipses")) {
    const auto& e = j.at("ellipses");
    if (!e.is_object()) throw ParseError("config: 'ellipses' must be an object");
    expect_keys(e, {"enabled", "case", "outliers", "b", "level"}, "'ellipses'");
    c.ellipses.enabled = read_bool(e, "enabled", c.ellipses.enabled);
    c.ellipses.case_index = read_int(e, "case", c.ellipses.case_index);
    c.ellipses.n_outliers = read_int(e, "outliers", c.ellipses.n_outliers);
    c.ellipses.b = read_int(e, "b", c.ellipses.b);
    c.ellipses.level = read_double(e, "level", c.ellipses.level);
  }

  c.data_path = read_string(j, "data", c.data_path);
  c.region = read_string(j, "region", c.region);
  c.variants = read_string_list(j, "variants", c.variants);
  c.suspected_outliers =
      read_string_list(j, "suspected_outliers", c.suspected_outliers);
  c.bootstrap_b = read_int(j, "bootstrap_b", c.bootstrap_b);
  c.level = read_double(j, "level", c.level);

  if (j.contains("output")) {
    const auto& o = j.at("output");
    if (!o.is_object()) throw ParseError("config: 'output' must be an object");
    expect_keys(o, {"dir", "formats"}, "'output'");
    c.output.dir = read_string(o, "dir", c.output.dir);
    c.output.formats = read_string_list(o, "formats", c.output.formats);
  }

  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

void ExperimentConfig::validate() const {
  static const char* kScenarios[] = {"shape-table", "frame-table",
                                     "earthquake"};
  require_subset({scenario}, kScenarios, "scenario");
  detail::require(replicates >= 0, "config: replicates must be >= 0");
  if (estimators.empty()) throw InvalidInput("config: estimators empty");
  static const char* kFormats[] = {"csv", "json", "svg"};
  require_subset(output.formats, kFormats, "output format");
  if (output.formats.empty()) throw InvalidInput("config: no output formats");
  if (output.dir.empty()) throw InvalidInput("config: output dir empty");

  if (scenario == "shape-table") {
    detail::require(n >= 1, "config: n must be >= 1");
    if (shapes.empty()) throw InvalidInput("config: shapes empty");
    for (int s : shapes)
      if (s < 1 || s > 3)
        throw InvalidInput("config: shape ids must be 1, 2 or 3");
    if (outliers.empty()) throw InvalidInput("config: outliers empty");
    for (int o : outliers)
      if (o < 0 || o > n)
        throw InvalidInput("config: outlier counts must lie in [0, n]");
    static const char* kNames[] = {"EMedian", "IMean", "IMedian", "MoM"};
    require_subset(estimators, kNames, "estimator");
    if (std::find(estimators.begin(), estimators.end(), "MoM") !=
        estimators.end())
      detail::require(n >= 7, "config: MoM needs n >= 7");
  } else if (scenario == "frame-table") {
    detail::require(n >= 1, "config: n must be >= 1");
    if (kappa_cases.empty()) throw InvalidInput("config: kappa_cases empty");
    for (const auto& k : kappa_cases)
      if (!(k.minCoeff() >= 0.0))
        throw InvalidInput("config: concentrations must be >= 0");
    if (outliers.empty()) throw InvalidInput("config: outliers empty");
    for (int o : outliers)
      if (o < 0 || o > n)
        throw InvalidInput("config: outlier counts must lie in [0, n]");
    static const char* kNames[] = {"mean", "median"};
    require_subset(estimators, kNames, "estimator");
    if (ellipses.enabled) {
      detail::require(ellipses.case_index >= 1 &&
                          ellipses.case_index <=
                              static_cast<int>(kappa_cases.size()),
                      "config: ellipse case out of range");
      detail::require(ellipses.n_outliers >= 0 && ellipses.n_outliers <= n,
                      "config: ellipse outliers out of range");
      detail::require(ellipses.b >= 8, "config: ellipse b must be >= 8");
      detail::require(ellipses.level > 0.0 && ellipses.level < 1.0,
                      "config: ellipse level must lie in (0,1)");
    }
  } else {
    if (data_path.empty()) throw InvalidInput("config: data path empty");
    if (variants.empty()) throw InvalidInput("config: variants empty");
    static const char* kVariants[] = {"full", "sub", "cont"};
    require_subset(variants, kVariants, "variant");
    static const char* kNames[] = {"mean", "median"};
    require_subset(estimators, kNames, "estimator");
    const bool edited =
        std::find(variants.begin(), variants.end(), std::string("sub")) !=
            variants.end() ||
        std::find(variants.begin(), variants.end(), std::string("cont")) !=
            variants.end();
    if (edited && suspected_outliers.size() != 4)
      throw InvalidInput(
          "config: sub/cont variants need exactly 4 suspected_outliers ids");
    detail::require(bootstrap_b >= 2, "config: bootstrap_b must be >= 2");
    detail::require(level > 0.0 && level < 1.0,
                    "config: level must lie in (0,1)");
  }
}

// ---------------------------------------------------------------------------
// shape study fixtures
// ---------------------------------------------------------------------------

CVector shape_configuration(int shape_id) {
  const Complex i(0.0, 1.0);
  switch (shape_id) {
    case 1: {
      CVector c(4);
      c << 0.29 - 0.29 * i, 0.29 + 0.57 * i, -0.01 + 0.01 * i,
          -0.57 - 0.29 * i;
      return c;
    }
    case 2: {
      CVector c(6);
      c << 0.32 + 0.00 * i, 0.13 + 0.06 * i, -0.06 + 0.57 * i,
          -0.44 + 0.00 * i, -0.06 - 0.57 * i, 0.13 - 0.06 * i;
      return c;
    }
    case 3: {
      CVector c(13);
      c << -0.17 + 0.36 * i, -0.03 + 0.41 * i, 0.10 + 0.33 * i,
          0.13 + 0.17 * i, 0.05 + 0.09 * i, -0.03 + 0.02 * i,
          -0.11 - 0.01 * i, -0.03 - 0.01 * i, 0.05 - 0.09 * i,
          0.13 - 0.17 * i, 0.10 - 0.33 * i, -0.03 - 0.40 * i,
          -0.17 - 0.36 * i;
      return c;
    }
    default:
      throw InvalidInput("shape id must be 1, 2 or 3");
  }
}

CVector shape_population_preshape(int shape_id) {
  return preshape(shape_configuration(shape_id));
}

double shape_concentration(int shape_id) {
  detail::require(shape_id >= 1 && shape_id <= 3, "shape id must be 1, 2 or 3");
  return shape_id == 3 ? 200.0 : 150.0;
}

// ---------------------------------------------------------------------------
// shape experiment
// ---------------------------------------------------------------------------

ShapeExperimentReport run_shape_experiment(const ExperimentConfig& config) {
  config.validate();
  detail::require(config.scenario == "shape-table",
                  "run_shape_experiment: wrong scenario");
  const auto t0 = std::chrono::steady_clock::now();

  ShapeExperimentReport report;
  report.config = config;

  const int reps = config.replicates;
  const int n_est = static_cast<int>(config.estimators.size());
  int cell_ordinal = 0;

  for (int shape_id : config.shapes) {
    const ShapeScenario sc = make_shape_scenario(shape_id);
    for (int n1 : config.outliers) {
      ++cell_ordinal;
      // Per-replicate slots; parallel workers write disjoint entries.
      std::vector<double> err(static_cast<std::size_t>(reps) *
                                  static_cast<std::size_t>(n_est),
                              quiet_nan());
      std::vector<std::uint8_t> ok(err.size(), 0);

      parallel_for(reps, [&](int rep) {
        Pcg64 rng(config.seed, cell_stream(cell_ordinal, rep));
        std::vector<CVector> data;
        try {
          data = sample_complex_bingham(sc.bingham, config.n, rng);
          const std::function<CVector(Pcg64&)> source = [&](Pcg64& r) {
            return shape_outlier(sc.z0, r);
          };
          contaminate<CVector>(data, n1, source, rng);
        } catch (const Error&) {
          return;  // sampler failure: every estimator of this replicate fails
        }
        // One adversarial starting point per replicate, orthogonal to the
        // population pre-shape, shared by the iterative estimators.
        const CVector init = shape_outlier(sc.z0, rng);
        for (int e = 0; e < n_est; ++e) {
          const std::size_t slot =
              static_cast<std::size_t>(rep) * static_cast<std::size_t>(n_est) +
              static_cast<std::size_t>(e);
          try {
            err[slot] = run_shape_estimator(config.estimators[
                                                static_cast<std::size_t>(e)],
                                            data, sc.z0, init, rng);
            ok[slot] = 1;
          } catch (const Error&) {
          }
        }
      });

      for (int e = 0; e < n_est; ++e) {
        ShapeCell cell;
        cell.shape_id = shape_id;
        cell.k = sc.k;
        cell.n = config.n;
        cell.n_outliers = n1;
        cell.estimator = config.estimators[static_cast<std::size_t>(e)];
        for (int rep = 0; rep < reps; ++rep) {
          const std::size_t slot =
              static_cast<std::size_t>(rep) * static_cast<std::size_t>(n_est) +
              static_cast<std::size_t>(e);
          if (ok[slot]) {
            cell.replicate_ids.push_back(rep);
            cell.errors.push_back(err[slot]);
          } else {
            ++cell.failures;
          }
        }
        cell.replicates_done = static_cast<int>(cell.errors.size());
        cell.median_error = median_of(cell.errors);
        cell.sd_error = sd_of(cell.errors);
        report.cells.push_back(std::move(cell));
      }
    }
  }

  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return report;
}

// ---------------------------------------------------------------------------
// frame experiment
// ---------------------------------------------------------------------------

FrameExperimentReport run_frame_experiment(const ExperimentConfig& config) {
  config.validate();
  detail::require(config.scenario == "frame-table",
                  "run_frame_experiment: wrong scenario");
  const auto t0 = std::chrono::steady_clock::now();

  FrameExperimentReport report;
  report.config = config;

  const ProjStiefelPoint m0 =
      ProjStiefelPoint::canonical(Matrix::Identity(3, 3));
  const int reps = config.replicates;
  const int n_est = static_cast<int>(config.estimators.size());
  int cell_ordinal = 0;

  for (std::size_t ci = 0; ci < config.kappa_cases.size(); ++ci) {
    FrameWatsonParams params;
    params.kappas = config.kappa_cases[ci];
    params.mode = Matrix::Identity(3, 3);
    for (int n1 : config.outliers) {
      ++cell_ordinal;
      std::vector<Eigen::Vector3d> err(
          static_cast<std::size_t>(reps) * static_cast<std::size_t>(n_est),
          Eigen::Vector3d::Constant(quiet_nan()));
      std::vector<std::uint8_t> ok(err.size(), 0);

      parallel_for(reps, [&](int rep) {
        Pcg64 rng(config.seed, cell_stream(cell_ordinal, rep));
        std::vector<ProjStiefelPoint> data;
        try {
          data = sample_frame_watson(params, config.n, rng);
          const std::function<ProjStiefelPoint(Pcg64&)> source =
              [](Pcg64&) { return frame_outlier(); };
          contaminate<ProjStiefelPoint>(data, n1, source, rng);
        } catch (const Error&) {
          return;
        }
        for (int e = 0; e < n_est; ++e) {
          const std::size_t slot =
              static_cast<std::size_t>(rep) * static_cast<std::size_t>(n_est) +
              static_cast<std::size_t>(e);
          try {
            const std::string& name =
                config.estimators[static_cast<std::size_t>(e)];
            const ProjStiefelPoint est = name == "mean"
                                             ? frame_mean_axial(data).frame
                                             : pfm_proj_stiefel(data).point;
            err[slot] = frame_angular_errors(est, m0);
            ok[slot] = 1;
          } catch (const Error&) {
          }
        }
      });

      for (int e = 0; e < n_est; ++e) {
        FrameCell cell;
        cell.case_index = static_cast<int>(ci) + 1;
        cell.kappa = config.kappa_cases[ci];
        cell.n = config.n;
        cell.n_outliers = n1;
        cell.estimator = config.estimators[static_cast<std::size_t>(e)];
        for (int rep = 0; rep < reps; ++rep) {
          const std::size_t slot =
              static_cast<std::size_t>(rep) * static_cast<std::size_t>(n_est) +
              static_cast<std::size_t>(e);
          if (ok[slot]) {
            cell.replicate_ids.push_back(rep);
            cell.errors.push_back(err[slot]);
          } else {
            ++cell.failures;
          }
        }
        cell.replicates_done = static_cast<int>(cell.errors.size());
        if (!cell.errors.empty()) {
          for (int axis = 0; axis < 3; ++axis) {
            std::vector<double> col;
            col.reserve(cell.errors.size());
            for (const auto& v : cell.errors) col.push_back(v[axis]);
            double mean = 0.0;
            for (double x : col) mean += x;
            cell.mean_error[axis] = mean / static_cast<double>(col.size());
            cell.sd_error[axis] = sd_of(col);
          }
        } else {
          cell.mean_error.setConstant(quiet_nan());
          cell.sd_error.setConstant(quiet_nan());
        }
        report.cells.push_back(std::move(cell));
      }
    }
  }

  if (config.ellipses.enabled) {
    // One extra dataset from the requested scenario; the median's per-axis
    // pivotal regions summarize its bootstrap distribution.
    const int ordinal = cell_ordinal + 1;
    Pcg64 rng(config.seed, cell_stream(ordinal, 0));
    FrameWatsonParams params;
    params.kappas =
        config.kappa_cases[static_cast<std::size_t>(config.ellipses.case_index - 1)];
    params.mode = Matrix::Identity(3, 3);
    std::vector<ProjStiefelPoint> data =
        sample_frame_watson(params, config.n, rng);
    const std::function<ProjStiefelPoint(Pcg64&)> source =
        [](Pcg64&) { return frame_outlier(); };
    contaminate<ProjStiefelPoint>(data, config.ellipses.n_outliers, source,
                                  rng);
    report.ellipse = pivotal_confidence_ellipse(
        data, config.ellipses.b, config.ellipses.level,
        RngSeed{config.seed, cell_stream(ordinal, 1)});
  }

  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return report;
}

// ---------------------------------------------------------------------------
// moment tensors
// ---------------------------------------------------------------------------

double MomentTensorRecord::trace_ratio() const {
  const double fro = m.norm();
  return fro > 0.0 ? std::abs(m.trace()) / fro : 0.0;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_field_double(const std::string& s, int line, int column) {
  const char* begin = s.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw ParseError("moment tensors: line " + std::to_string(line) +
                     ", column " + std::to_string(column) +
                     ": not a number: '" + s + "'");
  if (!std::isfinite(v))
    throw ParseError("moment tensors: line " + std::to_string(line) +
                     ", column " + std::to_string(column) +
                     ": non-finite entry");
  return v;
}

}  // namespace

std::vector<MomentTensorRecord> ingest_moment_tensors(
    const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("moment tensors: cannot open " + path);

  std::vector<MomentTensorRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != kMomentTensorHeader)
        throw ParseError(std::string("moment tensors: line 1: header must be "
                                     "exactly '") +
                         kMomentTensorHeader + "'");
      continue;
    }
    if (line.empty()) continue;  // tolerate a trailing blank line
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 8)
      throw ParseError("moment tensors: line " + std::to_string(line_no) +
                       ": expected 8 fields, got " + std::to_string(f.size()));
    MomentTensorRecord rec;
    rec.event_id = f[0];
    if (rec.event_id.empty())
      throw ParseError("moment tensors: line " + std::to_string(line_no) +
                       ", column 1: empty event id");
    const double m11 = parse_field_double(f[1], line_no, 2);
    const double m22 = parse_field_double(f[2], line_no, 3);
    const double m33 = parse_field_double(f[3], line_no, 4);
    const double m12 = parse_field_double(f[4], line_no, 5);
    const double m13 = parse_field_double(f[5], line_no, 6);
    const double m23 = parse_field_double(f[6], line_no, 7);
    rec.m = Matrix(3, 3);
    rec.m << m11, m12, m13, m12, m22, m23, m13, m23, m33;
    rec.region = f[7];
    rec.line = line_no;
    records.push_back(std::move(rec));
  }
  return records;
}

void write_moment_tensors(const std::string& path,
                          const std::vector<MomentTensorRecord>& records) {
  std::ostringstream out;
  out << kMomentTensorHeader << "\n";
  for (const auto& r : records) {
    out << r.event_id << ',' << g17(r.m(0, 0)) << ',' << g17(r.m(1, 1)) << ','
        << g17(r.m(2, 2)) << ',' << g17(r.m(0, 1)) << ',' << g17(r.m(0, 2))
        << ',' << g17(r.m(1, 2)) << ',' << r.region << "\n";
  }
  write_text_file(path, out.str());
}

ProjStiefelPoint extract_tbp_frame(const MomentTensorRecord& record) {
  detail::require(detail::all_finite(record.m), "moment tensor not finite");
  const SymEig dec = sym_eig(record.m);
  const double scale =
      std::max(std::abs(dec.eigenvalues[0]), std::abs(dec.eigenvalues[2]));
  for (int i = 0; i + 1 < 3; ++i) {
    if (dec.eigenvalues[i] - dec.eigenvalues[i + 1] <= 1e-10 * scale)
      throw DegenerateSpectrum("moment tensor of event '" + record.event_id +
                               "' has a repeated eigenvalue");
  }
  return ProjStiefelPoint::canonical(dec.vectors);
}

// ---------------------------------------------------------------------------
// earthquake analysis
// ---------------------------------------------------------------------------

namespace {

std::vector<MomentTensorRecord> apply_variant(
    const std::vector<MomentTensorRecord>& records,
    const std::vector<std::string>& suspected, const std::string& variant) {
  if (variant == "full") return records;
  // "sub": drop the suspected outliers labelled 1 and 3.
  // "cont": additionally re-insert labels 2 and 4 twice more each.
  const std::set<std::string> dropped = {suspected[0], suspected[2]};
  std::vector<MomentTensorRecord> out;
  for (const auto& r : records)
    if (dropped.find(r.event_id) == dropped.end()) out.push_back(r);
  if (variant == "cont") {
    for (const std::string& id : {suspected[1], suspected[3]}) {
      for (const auto& r : records) {
        if (r.event_id == id) {
          out.push_back(r);
          out.push_back(r);
        }
      }
    }
  }
  return out;
}

}  // namespace

QuakeReport run_earthquake_analysis(const ExperimentConfig& config) {
  config.validate();
  detail::require(config.scenario == "earthquake",
                  "run_earthquake_analysis: wrong scenario");
  const auto t0 = std::chrono::steady_clock::now();

  QuakeReport report;
  report.config = config;

  const std::vector<MomentTensorRecord> all =
      ingest_moment_tensors(config.data_path);
  for (const auto& r : all) {
    if (r.region == config.region) report.region_records.push_back(r);
  }
  report.n_region = static_cast<int>(report.region_records.size());
  if (report.n_region < 2)
    throw InvalidInput("earthquake: region '" + config.region +
                       "' has fewer than 2 events");

  for (const auto& r : report.region_records) {
    if (r.trace_ratio() > 0.05)
      report.warnings.push_back(
          "event '" + r.event_id + "' (line " + std::to_string(r.line) +
          "): |trace| is " + g17(r.trace_ratio()) +
          " of the Frobenius norm; moment tensors are usually trace-free");
  }

  const bool edited = std::any_of(
      config.variants.begin(), config.variants.end(),
      [](const std::string& v) { return v == "sub" || v == "cont"; });
  if (edited) {
    for (const auto& id : config.suspected_outliers) {
      const bool found = std::any_of(
          report.region_records.begin(), report.region_records.end(),
          [&](const MomentTensorRecord& r) { return r.event_id == id; });
      if (!found)
        throw InvalidInput("earthquake: suspected outlier '" + id +
                           "' not found in region '" + config.region + "'");
    }
  }

  int stream_slot = 0;
  for (const auto& variant : config.variants) {
    const std::vector<MomentTensorRecord> recs =
        apply_variant(report.region_records, config.suspected_outliers,
                      variant);
    std::vector<ProjStiefelPoint> frames;
    frames.reserve(recs.size());
    for (const auto& r : recs) frames.push_back(extract_tbp_frame(r));

    for (const auto& est_name : config.estimators) {
      const FrameEstimator fn =
          est_name == "mean"
              ? FrameEstimator([](const std::vector<ProjStiefelPoint>& d) {
                  return frame_mean_axial(d).frame;
                })
              : FrameEstimator([](const std::vector<ProjStiefelPoint>& d) {
                  return pfm_proj_stiefel(d).point;
                });
      const BootstrapFrameReport boot = bootstrap_frames(
          frames, fn, config.bootstrap_b,
          RngSeed{config.seed, cell_stream(++stream_slot, 0)});
      QuakeEstimateRow row;
      row.variant = variant;
      row.estimator = est_name;
      row.n_events = static_cast<int>(frames.size());
      row.axes = boot.estimate.x;
      row.se = boot.per_axis_se;
      row.bootstrap_failures = boot.failures;
      report.rows.push_back(std::move(row));
    }

    if (std::find(config.estimators.begin(), config.estimators.end(),
                  std::string("median")) != config.estimators.end()) {
      report.median_ellipses.emplace_back(
          variant,
          pivotal_confidence_ellipse(
              frames, config.bootstrap_b, config.level,
              RngSeed{config.seed, cell_stream(++stream_slot, 0)}));
    }
  }

  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return report;
}

// ---------------------------------------------------------------------------
// emission
// ---------------------------------------------------------------------------

std::vector<std::string> emit_outputs(const ShapeExperimentReport& report) {
  const auto& cfg = report.config;
  std::filesystem::create_directories(cfg.output.dir);
  std::vector<std::string> written;

  if (wants(cfg.output.formats, "csv")) {
    std::ostringstream table;
    table << "shape,k,n,outliers,estimator,median_error,sd_error,replicates,"
             "failures\n";
    for (const auto& c : report.cells) {
      table << c.shape_id << ',' << c.k << ',' << c.n << ',' << c.n_outliers
            << ',' << c.estimator << ',' << g17(c.median_error) << ','
            << g17(c.sd_error) << ',' << c.replicates_done << ',' << c.failures
            << "\n";
    }
    emit_file(written, cfg.output.dir, "shape_table.csv", table.str());

    std::ostringstream errors;
    errors << "shape,outliers,estimator,replicate,error\n";
    for (const auto& c : report.cells) {
      for (std::size_t i = 0; i < c.errors.size(); ++i) {
        errors << c.shape_id << ',' << c.n_outliers << ',' << c.estimator
               << ',' << c.replicate_ids[i] << ',' << g17(c.errors[i]) << "\n";
      }
    }
    emit_file(written, cfg.output.dir, "shape_errors.csv", errors.str());
  }

  if (wants(cfg.output.formats, "json")) {
    ordered_json j;
    j["schema_version"] = 1;
    j["kind"] = "shape-table-report";
    j["config"] = config_json(cfg);
    ordered_json cells = ordered_json::array();
    for (const auto& c : report.cells) {
      ordered_json jc;
      jc["shape"] = c.shape_id;
      jc["k"] = c.k;
      jc["n"] = c.n;
      jc["outliers"] = c.n_outliers;
      jc["estimator"] = c.estimator;
      jc["median_error"] = c.median_error;
      jc["sd_error"] = c.sd_error;
      jc["replicates_done"] = c.replicates_done;
      jc["failures"] = c.failures;
      jc["replicate_ids"] = c.replicate_ids;
      jc["errors"] = c.errors;
      cells.push_back(std::move(jc));
    }
    j["cells"] = cells;
    emit_file(written, cfg.output.dir, "shape_report.json", dump_json(j));
  }

  if (wants(cfg.output.formats, "svg")) {
    for (int shape_id : cfg.shapes) {
      for (int n1 : cfg.outliers) {
        std::vector<std::string> labels;
        std::vector<std::vector<double>> groups;
        for (const auto& c : report.cells) {
          if (c.shape_id == shape_id && c.n_outliers == n1 &&
              !c.errors.empty()) {
            labels.push_back(c.estimator);
            groups.push_back(c.errors);
          }
        }
        if (groups.empty()) continue;
        const std::string name = "shape_boxplot_s" + std::to_string(shape_id) +
                                 "_o" + std::to_string(n1) + ".svg";
        const std::string title = "log10 angular error, shape " +
                                  std::to_string(shape_id) + ", " +
                                  std::to_string(n1) + " outliers";
        emit_file(written, cfg.output.dir, name,
                  boxplot_svg(title, labels, groups));
      }
    }
  }
  return written;
}

std::vector<std::string> emit_outputs(const FrameExperimentReport& report) {
  const auto& cfg = report.config;
  std::filesystem::create_directories(cfg.output.dir);
  std::vector<std::string> written;

  if (wants(cfg.output.formats, "csv")) {
    std::ostringstream table;
    table << "case,kappa1,kappa2,kappa3,n,outliers,estimator,axis,mean_error,"
             "sd_error,replicates,failures\n";
    for (const auto& c : report.cells) {
      for (int axis = 0; axis < 3; ++axis) {
        table << c.case_index << ',' << g17(c.kappa[0]) << ','
              << g17(c.kappa[1]) << ',' << g17(c.kappa[2]) << ',' << c.n << ','
              << c.n_outliers << ',' << c.estimator << ',' << axis + 1 << ','
              << g17(c.mean_error[axis]) << ',' << g17(c.sd_error[axis]) << ','
              << c.replicates_done << ',' << c.failures << "\n";
      }
    }
    emit_file(written, cfg.output.dir, "frame_table.csv", table.str());

    std::ostringstream errors;
    errors << "case,outliers,estimator,replicate,error1,error2,error3\n";
    for (const auto& c : report.cells) {
      for (std::size_t i = 0; i < c.errors.size(); ++i) {
        errors << c.case_index << ',' << c.n_outliers << ',' << c.estimator
               << ',' << c.replicate_ids[i] << ',' << g17(c.errors[i][0])
               << ',' << g17(c.errors[i][1]) << ',' << g17(c.errors[i][2])
               << "\n";
      }
    }
    emit_file(written, cfg.output.dir, "frame_errors.csv", errors.str());
  }

  if (wants(cfg.output.formats, "json")) {
    ordered_json j;
    j["schema_version"] = 1;
    j["kind"] = "frame-table-report";
    j["config"] = config_json(cfg);
    ordered_json cells = ordered_json::array();
    for (const auto& c : report.cells) {
      ordered_json jc;
      jc["case"] = c.case_index;
      jc["kappa"] = {c.kappa[0], c.kappa[1], c.kappa[2]};
      jc["n"] = c.n;
      jc["outliers"] = c.n_outliers;
      jc["estimator"] = c.estimator;
      jc["mean_error"] = {c.mean_error[0], c.mean_error[1], c.mean_error[2]};
      jc["sd_error"] = {c.sd_error[0], c.sd_error[1], c.sd_error[2]};
      jc["replicates_done"] = c.replicates_done;
      jc["failures"] = c.failures;
      jc["replicate_ids"] = c.replicate_ids;
      ordered_json errs = ordered_json::array();
      for (const auto& v : c.errors)
        errs.push_back(std::vector<double>{v[0], v[1], v[2]});
      jc["errors"] = errs;
      cells.push_back(std::move(jc));
    }
    j["cells"] = cells;
    if (report.ellipse) j["ellipse"] = ellipse_report_json(*report.ellipse);
    emit_file(written, cfg.output.dir, "frame_report.json", dump_json(j));
  }

  if (wants(cfg.output.formats, "svg") && report.ellipse) {
    for (int axis = 0; axis < 3; ++axis) {
      const auto& ax = report.ellipse->axes[static_cast<std::size_t>(axis)];
      // The population axis, sign-aligned and log-mapped at the estimate.
      Eigen::Vector3d truth = Eigen::Vector3d::Zero();
      truth[axis] = 1.0;
      std::vector<std::pair<std::string, Eigen::Vector2d>> marks;
      marks.emplace_back("population axis",
                         axis_log_coordinates(ax.center_axis,
                                              ax.tangent_basis, truth));
      const std::string name =
          "frame_ellipse_axis" + std::to_string(axis + 1) + ".svg";
      emit_file(written, cfg.output.dir, name,
                axis_plane_svg("axis " + std::to_string(axis + 1) +
                                   " tangent plane",
                               ax, marks, {}));
    }
  }
  return written;
}

std::vector<std::string> emit_outputs(const QuakeReport& report) {
  const auto& cfg = report.config;
  std::filesystem::create_directories(cfg.output.dir);
  std::vector<std::string> written;
  static const char* kAxisNames[3] = {"T", "B", "P"};

  if (wants(cfg.output.formats, "csv")) {
    std::ostringstream table;
    table << "variant,estimator,n_events,axis,x,y,z,se\n";
    for (const auto& row : report.rows) {
      for (int axis = 0; axis < 3; ++axis) {
        table << row.variant << ',' << row.estimator << ',' << row.n_events
              << ',' << kAxisNames[axis] << ',' << g17(row.axes(0, axis))
              << ',' << g17(row.axes(1, axis)) << ',' << g17(row.axes(2, axis))
              << ',' << g17(row.se[axis]) << "\n";
      }
    }
    emit_file(written, cfg.output.dir, "quake_axes.csv", table.str());

    if (!report.median_ellipses.empty()) {
      std::ostringstream ell;
      ell << "variant,axis,center_x,center_y,center_z,cov11,cov12,cov22,"
             "radius2,degenerate,halfwidth1,halfwidth2\n";
      for (const auto& [variant, rep] : report.median_ellipses) {
        for (int axis = 0; axis < 3; ++axis) {
          const auto& e = rep.axes[static_cast<std::size_t>(axis)];
          ell << variant << ',' << kAxisNames[axis] << ','
              << g17(e.center_axis[0]) << ',' << g17(e.center_axis[1]) << ','
              << g17(e.center_axis[2]) << ',' << g17(e.second_moment(0, 0))
              << ',' << g17(e.second_moment(0, 1)) << ','
              << g17(e.second_moment(1, 1)) << ',' << g17(e.radius2) << ','
              << (e.degenerate ? 1 : 0) << ',' << g17(e.interval_halfwidth[0])
              << ',' << g17(e.interval_halfwidth[1]) << "\n";
        }
      }
      emit_file(written, cfg.output.dir, "quake_ellipses.csv", ell.str());
    }
  }

  if (wants(cfg.output.formats, "json")) {
    ordered_json j;
    j["schema_version"] = 1;
    j["kind"] = "earthquake-report";
    j["config"] = config_json(cfg);
    j["n_region"] = report.n_region;
    j["warnings"] = report.warnings;
    ordered_json rows = ordered_json::array();
    for (const auto& row : report.rows) {
      ordered_json jr;
      jr["variant"] = row.variant;
      jr["estimator"] = row.estimator;
      jr["n_events"] = row.n_events;
      for (int axis = 0; axis < 3; ++axis) {
        jr[kAxisNames[axis]] = {row.axes(0, axis), row.axes(1, axis),
                                row.axes(2, axis)};
      }
      jr["se"] = {row.se[0], row.se[1], row.se[2]};
      jr["bootstrap_failures"] = row.bootstrap_failures;
      rows.push_back(std::move(jr));
    }
    j["rows"] = rows;
    ordered_json ellipses = ordered_json::array();
    for (const auto& [variant, rep] : report.median_ellipses) {
      ordered_json je = ellipse_report_json(rep);
      je["variant"] = variant;
      ellipses.push_back(std::move(je));
    }
    j["median_ellipses"] = ellipses;
    emit_file(written, cfg.output.dir, "quake_report.json", dump_json(j));
  }

  if (wants(cfg.output.formats, "svg") && !report.median_ellipses.empty()) {
    // Draw every axis in the tangent plane at the full-variant median.
    const PivotalEllipseReport& base = report.median_ellipses.front().second;
    for (int axis = 0; axis < 3; ++axis) {
      const auto& ax = base.axes[static_cast<std::size_t>(axis)];
      std::vector<Eigen::Vector2d> cloud;
      for (const auto& r : report.region_records) {
        try {
          const ProjStiefelPoint f = extract_tbp_frame(r);
          cloud.push_back(axis_log_coordinates(ax.center_axis,
                                               ax.tangent_basis,
                                               f.x.col(axis)));
        } catch (const Error&) {
        }
      }
      std::vector<std::pair<std::string, Eigen::Vector2d>> marks;
      for (const auto& row : report.rows) {
        marks.emplace_back(
            row.estimator + "_" + row.variant,
            axis_log_coordinates(ax.center_axis, ax.tangent_basis,
                                 row.axes.col(axis)));
      }
      const std::string name =
          std::string("quake_axis_") + kAxisNames[axis] + ".svg";
      emit_file(written, cfg.output.dir, name,
                axis_plane_svg(std::string(kAxisNames[axis]) +
                                   " axis tangent plane",
                               ax, marks, cloud));
    }
  }
  return written;
}

}  // namespace pfm
