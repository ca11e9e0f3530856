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
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "pnsm/errors.hpp"
#include "pnsm/local_spectral.hpp"
#include "pnsm/types.hpp"

namespace pnsm {

/// P1 of a weighted projector sum is considered non-unique below this gap.
inline constexpr double kAmbiguousGap = 1e-10;

/// One normalized weight alpha_i(z); only in-ball samples appear.
struct WeightEntry {
  Index index;
  double value;
};

namespace detail {

inline double bump_power(double u, double beta) {
  // (1 - s^2/r^2)^beta; the beta == 3 fast path keeps test values bit-exact.
  if (beta == 3.0) return u * u * u;
  return std::pow(u, beta);
}

struct WeightScan {
  std::vector<WeightEntry> entries;  // normalized, ascending index
  double min_sq_distance;            // over in-ball samples
};

inline WeightScan weights_scan(const Eigen::RowVectorXd& z, const PointCloud& cloud, double r,
                               double beta) {
  if (!(r > 0.0)) throw std::invalid_argument("weights_at: radius must be positive");
  const double r2 = r * r;
  WeightScan scan;
  scan.min_sq_distance = std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (Index j = 0; j < cloud.size(); ++j) {
    const double d2 = (cloud.points.row(j) - z).squaredNorm();
    if (d2 > r2) continue;
    scan.min_sq_distance = std::min(scan.min_sq_distance, d2);
    const double w = bump_power(1.0 - d2 / r2, beta);
    if (w > 0.0) {
      scan.entries.push_back({j, w});
      total += w;
    }
  }
  if (!(total > 0.0))
    throw EmptyNeighborhood("weights_at: no sample strictly inside the radius-" +
                            std::to_string(r) + " ball");
  for (auto& e : scan.entries) e.value /= total;
  return scan;
}

}  // namespace detail

/// Normalized bump weights alpha_i(z) = (1 - ||z - x_i||^2 / r^2)^beta on the
/// radius-r ball, zero outside; the list carries only nonzero entries in
/// ascending sample order. Throws EmptyNeighborhood when the normalizer is zero.
inline std::vector<WeightEntry> weights_at(const Eigen::RowVectorXd& z, const PointCloud& cloud,
                                           double r, double beta = 3.0) {
  return detail::weights_scan(z, cloud, r, beta).entries;
}

/// Top eigenvector of sum_i alpha_i v_{i,k} v_{i,k}^T for direction index k
/// (0-based, ascending-eigenvalue order). The result is sign-canonical; the
/// associated projector u u^T is invariant to every per-frame eigenvector
/// sign. Throws AmbiguousDirection when the top eigenvalue is not simple.
inline Eigen::VectorXd aggregated_direction(const std::vector<SpectralFrame>& frames,
                                            const std::vector<WeightEntry>& weights, int k) {
  if (weights.empty()) throw std::invalid_argument("aggregated_direction: empty weight list");
  const Index dim = frames[static_cast<std::size_t>(weights.front().index)].eigenvectors.rows();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& e : weights) {
    const auto v = frames[static_cast<std::size_t>(e.index)].eigenvectors.col(k);
    acc.noalias() += e.value * (v * v.transpose());
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(acc);
  if (solver.info() != Eigen::Success)
    throw EigenFailure("aggregated_direction: eigensolver did not converge");
  const double gap = solver.eigenvalues()(dim - 1) - solver.eigenvalues()(dim - 2);
  if (gap < kAmbiguousGap)
    throw AmbiguousDirection(k, gap,
                             "aggregated_direction: top eigenvalue of the weighted projector sum "
                             "for direction " + std::to_string(k + 1) +
                             " is not simple (gap " + std::to_string(gap) + ")");
  Eigen::MatrixXd top = solver.eigenvectors().rightCols(1);
  detail::canonicalize_sign(top);
  return top.col(0);
}

/// The smooth weighted quantities of the estimator at one query point.
struct FieldEvaluation {
  Eigen::VectorXd query;
  std::vector<WeightEntry> weights;       // nonzero alpha_i(z), ascending index
  Eigen::VectorXd mu;                     // weighted reference point
  std::vector<Eigen::VectorXd> directions;  // aggregated unit directions, k = 1..K
  Eigen::VectorXd bias_sum;               // sum_k u_k u_k^T (z - mu)
  bool support_ok = true;                 // min_i ||z - x_i|| <= c * r
};

/// Evaluates weights, reference point, the first `codim` aggregated
/// directions, and the cumulative bias vector at z. `codim` may run up to the
/// ambient dimension (the full-projector identity case); fits only ever use
/// codim <= D-1.
inline FieldEvaluation evaluate_field(const Eigen::RowVectorXd& z, const PointCloud& cloud,
                                      const std::vector<SpectralFrame>& frames, double r,
                                      int codim, double support_c = 0.9, double beta = 3.0) {
  const Index dim = cloud.dim();
  if (codim < 1 || codim > dim)
    throw std::invalid_argument("evaluate_field: codimension out of range");
  detail::WeightScan scan = detail::weights_scan(z, cloud, r, beta);

  FieldEvaluation eval;
  eval.query = z.transpose();
  eval.weights = std::move(scan.entries);
  eval.mu = Eigen::VectorXd::Zero(dim);
  for (const auto& e : eval.weights) eval.mu.noalias() += e.value * cloud.points.row(e.index).transpose();

  const Eigen::VectorXd diff = eval.query - eval.mu;
  eval.bias_sum = Eigen::VectorXd::Zero(dim);
  eval.directions.reserve(static_cast<std::size_t>(codim));
  for (int k = 0; k < codim; ++k) {
    Eigen::VectorXd u = aggregated_direction(frames, eval.weights, k);
    eval.bias_sum.noalias() += u * (u.dot(diff));
    eval.directions.push_back(std::move(u));
  }
  eval.support_ok = scan.min_sq_distance <= (support_c * r) * (support_c * r);
  return eval;
}

}  // namespace pnsm
