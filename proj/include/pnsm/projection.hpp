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

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pnsm/embedding.hpp"
#include "pnsm/errors.hpp"
#include "pnsm/field.hpp"
#include "pnsm/local_spectral.hpp"
#include "pnsm/parallel.hpp"
#include "pnsm/types.hpp"

namespace pnsm {

/// Parameters of one nested fit.
struct FitConfig {
  double radius = 0.5;
  std::vector<int> dims;        // strictly descending, each in [1, D-1]
  double epsilon = 1e-6;        // convergence tolerance on ||F_z||
  int max_iter = 200;
  double support_c = 0.9;       // support constant c < 1 (flag only, never blocks)
  double beta = 3.0;            // weight exponent
  EmbeddingSpec embedding = EmbeddingSpec::euclidean(0);  // 0: take D from the data
  std::uint64_t seed = 0;       // recorded for replay; the fit itself is deterministic
  double step = 1.0;            // optional damping of z <- z + step * F_z
  bool recompute_frames = false;  // extension: re-estimate frames per level
  int ambiguous_retries = 3;
  double ambiguous_inflation = 1.05;
  int threads = 1;
  NeighborAccel accel = NeighborAccel::BruteForce;

  void validate(Index ambient_dim) const {
    if (!(radius > 0.0)) throw std::invalid_argument("FitConfig: radius must be positive");
    if (!(epsilon > 0.0)) throw std::invalid_argument("FitConfig: epsilon must be positive");
    if (max_iter < 1) throw std::invalid_argument("FitConfig: max_iter must be at least 1");
    if (!(support_c > 0.0 && support_c < 1.0))
      throw std::invalid_argument("FitConfig: support constant must lie in (0, 1)");
    if (dims.empty()) throw std::invalid_argument("FitConfig: dims must not be empty");
    for (std::size_t k = 0; k < dims.size(); ++k) {
      if (dims[k] < 1 || dims[k] > static_cast<int>(ambient_dim) - 1)
        throw std::invalid_argument("FitConfig: every target dimension must lie in [1, D-1]");
      if (k > 0 && dims[k] >= dims[k - 1])
        throw std::invalid_argument("FitConfig: dims must be strictly descending");
    }
  }
};

enum class PointFailure { None, EmptyNeighborhood, AmbiguousDirection };

inline const char* to_string(PointFailure f) {
  switch (f) {
    case PointFailure::None: return "none";
    case PointFailure::EmptyNeighborhood: return "empty_neighborhood";
    case PointFailure::AmbiguousDirection: return "ambiguous_direction";
  }
  return "?";
}

struct ProjectionOutcome {
  Eigen::VectorXd point;        // retract(z) at exit
  Eigen::VectorXd pre_retract;  // converged iterate before the final retraction
  int iterations = 0;           // field evaluations performed
  double residual = std::numeric_limits<double>::infinity();  // ||F_z|| at exit
  bool converged = false;
  bool support_ok = true;       // flag of the last evaluated iterate
  PointFailure failure = PointFailure::None;
};

namespace detail {

/// One run of the fixed-point iteration: F_z = sum_t P1(sum_i alpha_i Pi_{i,t}) (mu - z),
/// z <- z + F_z until ||F_z|| < epsilon, then retract once onto the embedding set.
/// An AmbiguousDirection tie retries the offending evaluation with the radius
/// inflated by 5% up to three times before giving up on the point.
inline ProjectionOutcome project_point_impl(const Eigen::RowVectorXd& z0, const PointCloud& cloud,
                                            const std::vector<SpectralFrame>& frames,
                                            const FitConfig& cfg, int d) {
  const Index dim = cloud.dim();
  const int codim = static_cast<int>(dim) - d;

  ProjectionOutcome out;
  Eigen::RowVectorXd z = z0;
  Eigen::RowVectorXd last_valid = z0;

  for (int iter = 1; iter <= cfg.max_iter; ++iter) {
    FieldEvaluation eval;
    bool evaluated = false;
    for (int attempt = 0; attempt <= cfg.ambiguous_retries && !evaluated; ++attempt) {
      const double radius = cfg.radius * std::pow(cfg.ambiguous_inflation, attempt);
      try {
        eval = evaluate_field(z, cloud, frames, radius, codim, cfg.support_c, cfg.beta);
        evaluated = true;
      } catch (const AmbiguousDirection&) {
        if (attempt == cfg.ambiguous_retries) out.failure = PointFailure::AmbiguousDirection;
      } catch (const EmptyNeighborhood&) {
        out.failure = PointFailure::EmptyNeighborhood;
        break;
      }
    }
    if (!evaluated) break;

    out.iterations = iter;
    out.support_ok = eval.support_ok;
    const Eigen::VectorXd force = -eval.bias_sum;  // sum_t Pi_t (mu - z)
    out.residual = force.norm();
    last_valid = z;
    if (out.residual < cfg.epsilon) {
      out.converged = true;
      break;
    }
    z += cfg.step * force.transpose();
  }

  const Eigen::RowVectorXd exit_z = out.failure == PointFailure::EmptyNeighborhood ? last_valid : z;
  out.pre_retract = exit_z.transpose();
  out.point = retract(exit_z.transpose(), cfg.embedding);
  if (out.failure != PointFailure::None) out.converged = false;
  return out;
}

}  // namespace detail

/// Projects one point onto the d-dimensional fitted submanifold. An iterate
/// that leaves every radius-r ball aborts the loop and returns the last valid
/// iterate flagged unconverged; an eigenvalue tie that survives the radius
/// retries is propagated as AmbiguousDirection.
inline ProjectionOutcome project_point(const Eigen::RowVectorXd& z0, const PointCloud& cloud,
                                       const std::vector<SpectralFrame>& frames,
                                       const FitConfig& cfg, int d) {
  if (d < 1 || d >= cloud.dim())
    throw std::invalid_argument("project_point: target dimension must lie in [1, D-1]");
  ProjectionOutcome out = detail::project_point_impl(z0, cloud, frames, cfg, d);
  if (out.failure == PointFailure::AmbiguousDirection)
    throw AmbiguousDirection(-1, 0.0,
                             "project_point: direction tie persisted through radius retries");
  return out;
}

/// Per-dimension record of one nested fit level.
struct LevelResult {
  int d = 0;
  PointCloud projected;                       // point order preserved
  std::optional<Eigen::MatrixX2d> angles;     // recovered angle pairs (shape ambients)
  Eigen::MatrixXd pre_retract;                // iterates before the final retraction
  std::vector<int> iterations;
  std::vector<double> residual_bias;          // ||F_z|| at exit, per point
  std::vector<char> converged;
  std::vector<char> support_ok;
  std::vector<PointFailure> failures;
  std::size_t failure_count = 0;
  std::size_t unconverged_count = 0;
  std::size_t unsupported_count = 0;          // support flag raised (warning only)
};

struct NestedResult {
  Eigen::MatrixXd embedded_input;  // X_D, the cloud every projection is evaluated against
  std::vector<LevelResult> levels;  // same descending-d order as FitConfig.dims
};

/// Backward nested fit: embed the raw data into the ambient set, precompute
/// frames once, then for each requested dimension project the PREVIOUS
/// level's output (this cascade is what makes the levels nested) while all
/// weights and frames keep referring to the original embedded cloud.
inline NestedResult fit_nested(const PointCloud& raw, const FitConfig& cfg) {
  raw.validate();

  // Embed. Shape-space ambients take angle pairs; euclidean takes points as-is.
  Eigen::MatrixXd embedded;
  EmbeddingSpec spec = cfg.embedding;
  if (spec.is_euclidean()) {
    if (spec.ambient_dim == 0) spec.ambient_dim = static_cast<int>(raw.dim());
    if (spec.ambient_dim != static_cast<int>(raw.dim()))
      throw std::invalid_argument("fit_nested: euclidean ambient dimension does not match data");
    embedded = raw.points;
  } else {
    if (raw.dim() != 2)
      throw std::invalid_argument("fit_nested: sphere/torus ambients expect angle pairs (2 columns)");
    embedded.resize(raw.size(), spec.ambient_dim);
    for (Index i = 0; i < raw.size(); ++i)
      embedded.row(i) = embed_angles(raw.points(i, 0), raw.points(i, 1), spec).transpose();
  }

  FitConfig level_cfg = cfg;
  level_cfg.embedding = spec;
  level_cfg.validate(embedded.cols());

  PointCloud reference(embedded, raw.source);
  reference.labels = raw.labels;
  FrameOptions fopt{cfg.accel, cfg.threads};
  std::vector<SpectralFrame> frames = precompute_frames(reference, cfg.radius, fopt);

  NestedResult result;
  result.embedded_input = embedded;

  const std::size_t n = static_cast<std::size_t>(embedded.rows());
  Eigen::MatrixXd current = embedded;
  bool first_level = true;
  for (int d : cfg.dims) {
    if (cfg.recompute_frames && !first_level) {
      // Extension (off by default): re-estimate the reference cloud and frames
      // from this level's input instead of X_D.
      reference = PointCloud(current, raw.source);
      frames = precompute_frames(reference, cfg.radius, fopt);
    }
    first_level = false;

    LevelResult level;
    level.d = d;
    level.projected.points.resize(current.rows(), current.cols());
    level.projected.labels = raw.labels;
    level.projected.source = raw.source;
    level.pre_retract.resize(current.rows(), current.cols());
    level.iterations.resize(n);
    level.residual_bias.resize(n);
    level.converged.resize(n);
    level.support_ok.resize(n);
    level.failures.resize(n);

    parallel_for(n, cfg.threads, [&](std::size_t i) {
      const Index idx = static_cast<Index>(i);
      ProjectionOutcome o =
          detail::project_point_impl(current.row(idx), reference, frames, level_cfg, d);
      level.projected.points.row(idx) = o.point.transpose();
      level.pre_retract.row(idx) = o.pre_retract.transpose();
      level.iterations[i] = o.iterations;
      level.residual_bias[i] = o.residual;
      level.converged[i] = o.converged ? 1 : 0;
      level.support_ok[i] = o.support_ok ? 1 : 0;
      level.failures[i] = o.failure;
    });

    for (std::size_t i = 0; i < n; ++i) {
      if (level.failures[i] != PointFailure::None) ++level.failure_count;
      if (!level.converged[i]) ++level.unconverged_count;
      if (!level.support_ok[i]) ++level.unsupported_count;
    }
    if (2 * level.failure_count > n)
      throw FitAborted(d, level.failure_count, n,
                       "fit_nested: more than half of the points failed at dimension " +
                           std::to_string(d));

    if (!spec.is_euclidean()) {
      Eigen::MatrixX2d angles(current.rows(), 2);
      for (Index i = 0; i < current.rows(); ++i) {
        const auto [phi, psi] = recover_angles(level.projected.points.row(i).transpose(), spec);
        angles(i, 0) = phi;
        angles(i, 1) = psi;
      }
      level.angles = std::move(angles);
    }

    current = level.projected.points;
    result.levels.push_back(std::move(level));
  }
  return result;
}

/// Linear baseline: mean-centered projection onto the span of the top-d
/// eigenvectors of the global covariance, mean added back. d = D is the identity.
inline PointCloud pca_projection(const PointCloud& cloud, int d) {
  const Index dim = cloud.dim();
  if (d < 1 || d > static_cast<int>(dim))
    throw std::invalid_argument("pca_projection: target dimension must lie in [1, D]");
  PointCloud out = cloud;
  if (d == static_cast<int>(dim)) return out;

  const Eigen::RowVectorXd mean = cloud.points.colwise().mean();
  const Eigen::MatrixXd centered = cloud.points.rowwise() - mean;
  const Eigen::MatrixXd cov =
      (centered.transpose() * centered) / static_cast<double>(cloud.size());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success)
    throw EigenFailure("pca_projection: eigensolver did not converge");
  const Eigen::MatrixXd top = solver.eigenvectors().rightCols(d);
  out.points = (centered * top) * top.transpose();
  out.points.rowwise() += mean;
  return out;
}

}  // namespace pnsm
