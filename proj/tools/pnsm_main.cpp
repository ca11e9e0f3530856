/*
 * Copyright (c) 2026, the pnsm authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line front end: simulate | fit | pca | metrics | filter.
// Every run writes a manifest with the resolved argument vector; re-running
// those arguments reproduces the outputs byte for byte.
//
// Exit codes: 0 success, 2 usage error, 3 numerical failure, 4 I/O error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pnsm/pnsm.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pnsm;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

int default_threads() {
  if (const char* env = std::getenv("PNSM_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 1;
}

std::string format_int(long long v) { return std::to_string(v); }

std::vector<int> parse_dims(const std::string& text) {
  std::vector<int> dims;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (cell.empty()) throw CLI::ValidationError("--dims", "empty dimension entry");
    try {
      dims.push_back(std::stoi(cell));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--dims", "cannot parse dimension '" + cell + "'");
    }
  }
  if (dims.empty()) throw CLI::ValidationError("--dims", "no dimensions given");
  return dims;
}

std::string dims_to_string(const std::vector<int>& dims) {
  std::string out;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(dims[i]);
  }
  return out;
}

const std::map<std::string, ScenarioCase>& case_table() {
  static const std::map<std::string, ScenarioCase> table = {
      {"euclid-line", ScenarioCase::EuclidLine},
      {"euclid-circle", ScenarioCase::EuclidCircle},
      {"euclid-involute", ScenarioCase::EuclidInvolute},
      {"sphere-circle", ScenarioCase::SphereCircle},
      {"sphere-tennis", ScenarioCase::SphereTennis},
      {"sphere-involute", ScenarioCase::SphereInvolute},
      {"torus-circle-major", ScenarioCase::TorusCircleMajor},
      {"torus-circle-minor", ScenarioCase::TorusCircleMinor},
      {"torus-involute", ScenarioCase::TorusInvolute},
  };
  return table;
}

EmbeddingSpec parse_embedding(const std::string& name, int euclidean_dim) {
  if (name == "euclidean") return EmbeddingSpec::euclidean(euclidean_dim);
  if (name == "sphere") return EmbeddingSpec::sphere2();
  if (name == "torus") return EmbeddingSpec::torus2();
  throw std::invalid_argument("unknown embedding '" + name + "'");
}

std::vector<std::string> coordinate_header(Index dim) {
  std::vector<std::string> header;
  for (Index k = 1; k <= dim; ++k) header.push_back("x" + std::to_string(k));
  return header;
}

/// Loads the coordinate block of a CSV, ignoring bookkeeping columns (t,
/// phi, psi, label, ...).
PointCloud load_cloud(const std::string& path) {
  const CsvTable table = read_csv(path);
  PointCloud cloud(table.coordinates(), path);
  return cloud;
}

std::vector<int> load_labels(const std::string& path) {
  const CsvTable table = read_csv(path);
  Index col = table.column("label");
  if (col < 0) {
    if (table.cols() != 1)
      throw IoError("labels file '" + path + "' must have a single 'label' column");
    col = 0;
  }
  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>(table.rows()));
  for (Index i = 0; i < table.rows(); ++i)
    labels.push_back(static_cast<int>(table.values(i, col)));
  return labels;
}

void ensure_parent_dir(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  std::string case_name;
  long long n = 0;
  double sigma1 = -1.0;  // negative: use the case default
  double sigma2 = -1.0;
  double sigma = -1.0;
  std::uint64_t seed = 0;
  bool strict_circle = false;
  std::string out;
};

int run_simulate(const SimulateArgs& args) {
  const auto it = case_table().find(args.case_name);
  if (it == case_table().end()) {
    std::cerr << "simulate: unknown case '" << args.case_name << "'\n";
    return kExitUsage;
  }
  if (args.n < 1) {
    std::cerr << "simulate: --n must be at least 1\n";
    return kExitUsage;
  }

  ScenarioSpec spec = ScenarioSpec::make(it->second, static_cast<Index>(args.n), args.seed);
  if (args.sigma1 >= 0.0) spec.sigma1 = args.sigma1;
  if (args.sigma2 >= 0.0) spec.sigma2 = args.sigma2;
  if (args.sigma >= 0.0) spec.sigma = args.sigma;
  spec.strict_circle_interval = args.strict_circle;

  Eigen::MatrixXd table;
  Index dim = 0;
  if (is_euclidean_case(spec.scenario)) {
    const EuclideanSample sample = gen_euclidean(spec);
    dim = 3;
    table.resize(spec.n, 4);
    table.leftCols(3) = sample.cloud.points;
    for (Index i = 0; i < spec.n; ++i) table(i, 3) = sample.t[static_cast<std::size_t>(i)];
  } else {
    const ShapeSample sample = gen_shape(spec);
    dim = 2;
    table.resize(spec.n, 3);
    table.leftCols(2) = sample.angles;
    for (Index i = 0; i < spec.n; ++i) table(i, 2) = sample.t[static_cast<std::size_t>(i)];
  }

  std::vector<std::string> header = coordinate_header(dim);
  header.push_back("t");
  ensure_parent_dir(args.out);
  write_csv(args.out, header, table, FloatFormat::Digits17);

  RunManifest manifest;
  manifest.command = "simulate";
  manifest.argv = {"simulate", "--case", args.case_name, "--n", format_int(args.n),
                   "--seed", std::to_string(args.seed), "--out", args.out};
  if (is_euclidean_case(spec.scenario)) {
    manifest.argv.insert(manifest.argv.end(),
                         {"--sigma1", format_double(spec.sigma1, FloatFormat::Shortest),
                          "--sigma2", format_double(spec.sigma2, FloatFormat::Shortest)});
  } else {
    manifest.argv.insert(manifest.argv.end(),
                         {"--sigma", format_double(spec.sigma, FloatFormat::Shortest)});
  }
  if (args.strict_circle) manifest.argv.push_back("--strict-circle-interval");
  manifest.parameters = {{"case", args.case_name},
                         {"n", args.n},
                         {"seed", spec.seed},
                         {"sigma1", spec.sigma1},
                         {"sigma2", spec.sigma2},
                         {"sigma", spec.sigma},
                         {"strict_circle_interval", spec.strict_circle_interval},
                         {"out", args.out}};
  write_manifest(args.out + ".manifest.json", manifest);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// fit

struct FitArgs {
  std::string input;
  double radius = 0.0;
  std::string dims_text;
  std::string embedding = "euclidean";
  double epsilon = 1e-6;
  int max_iter = 200;
  double support_c = 0.9;
  double beta = 3.0;
  double step = 1.0;
  std::uint64_t seed = 0;
  int threads = default_threads();
  bool recompute_frames = false;
  std::string accel = "brute";
  std::string outdir;
};

int run_fit(const FitArgs& args) {
  const std::vector<int> dims = parse_dims(args.dims_text);

  const CsvTable table = read_csv(args.input);
  PointCloud raw(table.coordinates(), args.input);
  raw.validate();

  FitConfig cfg;
  cfg.radius = args.radius;
  cfg.dims = dims;
  cfg.epsilon = args.epsilon;
  cfg.max_iter = args.max_iter;
  cfg.support_c = args.support_c;
  cfg.beta = args.beta;
  cfg.step = args.step;
  cfg.seed = args.seed;
  cfg.threads = args.threads;
  cfg.recompute_frames = args.recompute_frames;
  cfg.accel = args.accel == "grid" ? NeighborAccel::Grid : NeighborAccel::BruteForce;
  cfg.embedding = parse_embedding(args.embedding, static_cast<int>(raw.dim()));
  if (!cfg.embedding.is_euclidean() && raw.dim() != 2) {
    std::cerr << "fit: " << args.embedding << " embedding expects 2 angle columns, got "
              << raw.dim() << "\n";
    return kExitUsage;
  }

  const NestedResult result = fit_nested(raw, cfg);

  // any direction tie that survived the radius retries is a numerical failure
  std::size_t ambiguous = 0;
  for (const auto& level : result.levels)
    for (const auto f : level.failures)
      if (f == PointFailure::AmbiguousDirection) ++ambiguous;
  if (ambiguous > 0) {
    std::cerr << "fit: " << ambiguous
              << " points kept an ambiguous principal direction after radius retries\n";
    for (const auto& level : result.levels)
      std::cerr << "  level d=" << level.d << ": " << level.failure_count << " failures, "
                << level.unconverged_count << " unconverged\n";
    return kExitNumerical;
  }

  fs::create_directories(args.outdir);
  const bool shape = !cfg.embedding.is_euclidean();
  for (const auto& level : result.levels) {
    const Index dim = level.projected.dim();
    Eigen::MatrixXd out = level.projected.points;
    std::vector<std::string> header = coordinate_header(dim);
    if (shape) {
      out.conservativeResize(out.rows(), dim + 2);
      out.rightCols(2) = *level.angles;
      header.push_back("phi");
      header.push_back("psi");
    }
    write_csv((fs::path(args.outdir) / ("d" + std::to_string(level.d) + ".csv")).string(),
              header, out, FloatFormat::Shortest);
    if (level.unsupported_count > 0)
      std::cerr << "fit: warning: " << level.unsupported_count << " of " << level.projected.size()
                << " points ended outside the support region at level d=" << level.d << "\n";
  }

  // per-point diagnostics across levels
  {
    std::size_t total_rows = 0;
    for (const auto& level : result.levels)
      total_rows += static_cast<std::size_t>(level.projected.size());
    Eigen::MatrixXd diag(static_cast<Index>(total_rows), 6);
    Index r = 0;
    for (const auto& level : result.levels) {
      for (Index i = 0; i < level.projected.size(); ++i, ++r) {
        const auto u = static_cast<std::size_t>(i);
        diag(r, 0) = level.d;
        diag(r, 1) = static_cast<double>(i);
        diag(r, 2) = level.iterations[u];
        diag(r, 3) = level.residual_bias[u];
        diag(r, 4) = level.converged[u] ? 1.0 : 0.0;
        diag(r, 5) = level.failures[u] == PointFailure::None
                         ? 0.0
                         : (level.failures[u] == PointFailure::EmptyNeighborhood ? 1.0 : 2.0);
      }
    }
    write_csv((fs::path(args.outdir) / "diagnostics.csv").string(),
              {"d", "index", "iterations", "residual", "converged", "failure"}, diag,
              FloatFormat::Shortest);
  }

  RunManifest manifest;
  manifest.command = "fit";
  manifest.argv = {"fit",
                   "--input", args.input,
                   "--radius", format_double(cfg.radius, FloatFormat::Shortest),
                   "--dims", dims_to_string(dims),
                   "--embedding", args.embedding,
                   "--epsilon", format_double(cfg.epsilon, FloatFormat::Shortest),
                   "--max-iter", format_int(cfg.max_iter),
                   "--c", format_double(cfg.support_c, FloatFormat::Shortest),
                   "--beta", format_double(cfg.beta, FloatFormat::Shortest),
                   "--step", format_double(cfg.step, FloatFormat::Shortest),
                   "--seed", std::to_string(cfg.seed),
                   "--threads", format_int(cfg.threads),
                   "--accel", args.accel,
                   "--outdir", args.outdir};
  if (args.recompute_frames) manifest.argv.push_back("--recompute-frames");
  manifest.parameters = {{"input", args.input},
                         {"radius", cfg.radius},
                         {"dims", dims},
                         {"embedding", args.embedding},
                         {"epsilon", cfg.epsilon},
                         {"max_iter", cfg.max_iter},
                         {"c", cfg.support_c},
                         {"beta", cfg.beta},
                         {"step", cfg.step},
                         {"seed", cfg.seed},
                         {"threads", cfg.threads},
                         {"accel", args.accel},
                         {"recompute_frames", cfg.recompute_frames},
                         {"outdir", args.outdir}};
  write_manifest((fs::path(args.outdir) / "manifest.json").string(), manifest);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// pca

struct PcaArgs {
  std::string input;
  std::string dims_text;
  std::string outdir;
};

int run_pca(const PcaArgs& args) {
  const std::vector<int> dims = parse_dims(args.dims_text);
  PointCloud cloud = load_cloud(args.input);
  cloud.validate();
  for (int d : dims)
    if (d < 1 || d > static_cast<int>(cloud.dim())) {
      std::cerr << "pca: dimension " << d << " out of range [1, " << cloud.dim() << "]\n";
      return kExitUsage;
    }

  fs::create_directories(args.outdir);
  for (int d : dims) {
    const PointCloud projected = pca_projection(cloud, d);
    write_csv((fs::path(args.outdir) / ("d" + std::to_string(d) + ".csv")).string(),
              coordinate_header(cloud.dim()), projected.points, FloatFormat::Shortest);
  }

  RunManifest manifest;
  manifest.command = "pca";
  manifest.argv = {"pca", "--input", args.input, "--dims", dims_to_string(dims),
                   "--outdir", args.outdir};
  manifest.parameters = {{"input", args.input}, {"dims", dims}, {"outdir", args.outdir}};
  write_manifest((fs::path(args.outdir) / "manifest.json").string(), manifest);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// metrics

struct MetricsArgs {
  std::string original;
  std::vector<std::string> projected;
  std::string labels;
  std::string embedding = "euclidean";
  int knn = 20;
  std::string mode = "cumulative";
  int threads = default_threads();
  std::string outdir;
};

int parse_level_dim(const std::string& path) {
  const std::string stem = fs::path(path).stem().string();
  if (stem.size() >= 2 && stem.front() == 'd') {
    try {
      return std::stoi(stem.substr(1));
    } catch (const std::exception&) {
    }
  }
  throw IoError("metrics: cannot infer the dimension from file name '" + path +
                "' (expected d<k>.csv)");
}

int run_metrics(const MetricsArgs& args) {
  if (args.mode != "cumulative" && args.mode != "stepwise") {
    std::cerr << "metrics: --mode must be cumulative or stepwise\n";
    return kExitUsage;
  }

  PointCloud original = load_cloud(args.original);
  const EmbeddingSpec spec = parse_embedding(args.embedding, static_cast<int>(original.dim()));
  if (!spec.is_euclidean()) {
    if (original.dim() != 2) {
      std::cerr << "metrics: " << args.embedding << " embedding expects 2 angle columns\n";
      return kExitUsage;
    }
    Eigen::MatrixXd embedded(original.size(), spec.ambient_dim);
    for (Index i = 0; i < original.size(); ++i)
      embedded.row(i) =
          embed_angles(original.points(i, 0), original.points(i, 1), spec).transpose();
    original.points = embedded;
  }

  std::optional<std::vector<int>> labels;
  if (!args.labels.empty()) {
    labels = load_labels(args.labels);
    if (static_cast<Index>(labels->size()) != original.size())
      throw IoError("metrics: label count does not match the original cloud");
  }

  struct Level {
    int d;
    PointCloud cloud;
  };
  std::vector<Level> levels;
  for (const auto& path : args.projected) {
    Level level{parse_level_dim(path), load_cloud(path)};
    if (level.cloud.dim() != original.dim() || level.cloud.size() != original.size())
      throw ShapeMismatch("metrics: '" + path + "' does not match the original cloud shape");
    levels.push_back(std::move(level));
  }
  std::sort(levels.begin(), levels.end(),
            [](const Level& a, const Level& b) { return a.d > b.d; });

  const VariationResult base_variation = geodesic_variation(original, args.knn, args.threads);

  MetricReport report;
  report.metadata = {
      {"original", args.original},
      {"knn", std::to_string(args.knn)},
      {"mode", args.mode},
      {"baseline_variation", format_double(base_variation.total, FloatFormat::Shortest)},
      {"baseline_connected", base_variation.connected ? "yes" : "no"}};

  double step_baseline = base_variation.total;
  for (auto& level : levels) {
    MetricRow row;
    row.d = level.d;
    if (labels) {
      level.cloud.labels = labels;
      row.silhouette = avg_silhouette(level.cloud);
    }
    VariationResult vr;
    const double baseline = args.mode == "cumulative" ? base_variation.total : step_baseline;
    row.variation_ratio = prop_variation(level.cloud, baseline, args.knn, &vr, args.threads);
    row.graph_connected = vr.connected;
    if (!vr.connected)
      std::cerr << "metrics: warning: kNN graph disconnected at d=" << level.d
                << ", using the largest component (" << vr.component_size << " points)\n";
    row.mse_value = mse(original, level.cloud);
    step_baseline = vr.total;
    report.rows.push_back(row);
  }

  fs::create_directories(args.outdir);
  write_metric_csv((fs::path(args.outdir) / "metrics.csv").string(), report);
  write_metric_text((fs::path(args.outdir) / "metrics.txt").string(), report);

  RunManifest manifest;
  manifest.command = "metrics";
  manifest.argv = {"metrics", "--original", args.original};
  for (const auto& p : args.projected) {
    manifest.argv.push_back("--projected");
    manifest.argv.push_back(p);
  }
  if (!args.labels.empty()) {
    manifest.argv.push_back("--labels");
    manifest.argv.push_back(args.labels);
  }
  manifest.argv.insert(manifest.argv.end(),
                       {"--embedding", args.embedding, "--knn", format_int(args.knn), "--mode",
                        args.mode, "--threads", format_int(args.threads), "--outdir",
                        args.outdir});
  manifest.parameters = {{"original", args.original}, {"projected", args.projected},
                         {"labels", args.labels},     {"embedding", args.embedding},
                         {"knn", args.knn},           {"mode", args.mode},
                         {"threads", args.threads},   {"outdir", args.outdir}};
  write_manifest((fs::path(args.outdir) / "manifest.json").string(), manifest);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// filter

struct FilterArgs {
  std::string input;
  double radius = 6.0;
  int min_neighbors = 25;
  std::string out;
};

int run_filter(const FilterArgs& args) {
  const CsvTable table = read_csv(args.input);
  const PointCloud cloud(table.coordinates(), args.input);
  cloud.validate();

  const FilterResult result = outlier_filter(cloud, args.radius, args.min_neighbors);
  if (result.kept.size() == 0)
    std::cerr << "filter: warning: no point satisfies the neighbor threshold; output is empty\n";

  // pass all original columns through for the kept rows
  Eigen::MatrixXd kept_rows(result.kept.size(), table.cols());
  {
    Index w = 0;
    std::size_t removed_pos = 0;
    for (Index i = 0; i < table.rows(); ++i) {
      if (removed_pos < result.removed.size() && result.removed[removed_pos] == i) {
        ++removed_pos;
        continue;
      }
      kept_rows.row(w++) = table.values.row(i);
    }
  }
  ensure_parent_dir(args.out);
  write_csv(args.out, table.header, kept_rows, FloatFormat::Shortest);

  const fs::path removed_path =
      fs::path(args.out).parent_path() / (fs::path(args.out).stem().string() + "_removed.csv");
  {
    std::ofstream out(removed_path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + removed_path.string() + "' for writing");
    out << "index\n";
    for (Index i : result.removed) out << i << '\n';
  }

  RunManifest manifest;
  manifest.command = "filter";
  manifest.argv = {"filter", "--input", args.input,
                   "--radius", format_double(args.radius, FloatFormat::Shortest),
                   "--min-neighbors", format_int(args.min_neighbors),
                   "--out", args.out};
  manifest.parameters = {{"input", args.input},
                         {"radius", args.radius},
                         {"min_neighbors", args.min_neighbors},
                         {"out", args.out},
                         {"kept", result.kept.size()},
                         {"removed", static_cast<long long>(result.removed.size())}};
  write_manifest(args.out + ".manifest.json", manifest);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"principal nested submanifolds: simulation, fitting, baselines, metrics"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand("simulate", "generate a synthetic scenario CSV");
  simulate->add_option("--case", sim.case_name, "scenario id (e.g. euclid-line, torus-involute)")
      ->required();
  simulate->add_option("--n", sim.n, "sample count")->required();
  simulate->add_option("--sigma1", sim.sigma1, "first noise level (Euclidean cases)");
  simulate->add_option("--sigma2", sim.sigma2, "second noise level (Euclidean cases)");
  simulate->add_option("--sigma", sim.sigma, "angle-plane noise level (shape cases)");
  simulate->add_option("--seed", sim.seed, "RNG seed");
  simulate->add_flag("--strict-circle-interval", sim.strict_circle,
                     "use the literal t in (0,1) interval for euclid-circle");
  simulate->add_option("--out", sim.out, "output CSV path")->required();

  FitArgs fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "fit principal nested submanifolds");
  fit_cmd->add_option("--input", fit.input, "input CSV")->required();
  fit_cmd->add_option("--radius", fit.radius, "local window radius r")->required();
  fit_cmd->add_option("--dims", fit.dims_text, "descending target dimensions, e.g. 2,1")
      ->required();
  fit_cmd->add_option("--embedding", fit.embedding, "euclidean | sphere | torus");
  fit_cmd->add_option("--epsilon", fit.epsilon, "convergence tolerance on ||F_z||");
  fit_cmd->add_option("--max-iter", fit.max_iter, "iteration cap per point");
  fit_cmd->add_option("--c", fit.support_c, "support constant in (0,1)");
  fit_cmd->add_option("--beta", fit.beta, "weight exponent");
  fit_cmd->add_option("--step", fit.step, "step-size factor for z <- z + step * F_z");
  fit_cmd->add_option("--seed", fit.seed, "seed recorded for replay");
  fit_cmd->add_option("--threads", fit.threads, "worker threads (env PNSM_THREADS)");
  fit_cmd->add_flag("--recompute-frames", fit.recompute_frames,
                    "extension: re-estimate frames per level");
  fit_cmd->add_option("--accel", fit.accel, "neighbor search: brute | grid");
  fit_cmd->add_option("--outdir", fit.outdir, "output directory")->required();

  PcaArgs pca;
  CLI::App* pca_cmd = app.add_subcommand("pca", "linear PCA baseline projections");
  pca_cmd->add_option("--input", pca.input, "input CSV")->required();
  pca_cmd->add_option("--dims", pca.dims_text, "target dimensions, e.g. 2,1")->required();
  pca_cmd->add_option("--outdir", pca.outdir, "output directory")->required();

  MetricsArgs met;
  CLI::App* met_cmd = app.add_subcommand("metrics", "evaluation metrics for projected clouds");
  met_cmd->add_option("--original", met.original, "original cloud CSV")->required();
  met_cmd->add_option("--projected", met.projected, "projected CSVs (d<k>.csv)")
      ->required()
      ->delimiter(',');
  met_cmd->add_option("--labels", met.labels, "optional per-point labels CSV");
  met_cmd->add_option("--embedding", met.embedding,
                      "embedding of the original cloud: euclidean | sphere | torus");
  met_cmd->add_option("--knn", met.knn, "neighbor count for the geodesic graph");
  met_cmd->add_option("--mode", met.mode, "variation normalization: cumulative | stepwise");
  met_cmd->add_option("--threads", met.threads, "worker threads");
  met_cmd->add_option("--outdir", met.outdir, "output directory")->required();

  FilterArgs flt;
  CLI::App* flt_cmd = app.add_subcommand("filter", "remove low-neighbor-count outliers");
  flt_cmd->add_option("--input", flt.input, "input CSV")->required();
  flt_cmd->add_option("--radius", flt.radius, "neighborhood radius");
  flt_cmd->add_option("--min-neighbors", flt.min_neighbors, "minimum neighbor count");
  flt_cmd->add_option("--out", flt.out, "output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim);
    if (fit_cmd->parsed()) return run_fit(fit);
    if (pca_cmd->parsed()) return run_pca(pca);
    if (met_cmd->parsed()) return run_metrics(met);
    if (flt_cmd->parsed()) return run_filter(flt);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
