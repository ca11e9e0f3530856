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
#include <string>
#include <vector>

#include "pnsm/errors.hpp"
#include "pnsm/neighbors.hpp"
#include "pnsm/parallel.hpp"
#include "pnsm/types.hpp"

namespace pnsm {

/// Eigenvalue gaps below this are treated as ties by downstream consumers.
inline constexpr double kSymmetryTol = 1e-10;

/// Ascending eigen-decomposition of one sample's radius-r local covariance.
/// Column k of `eigenvectors` pairs with `eigenvalues[k]`; the rank-one
/// projector onto direction k is v_k v_k^T and is never stored densely.
struct SpectralFrame {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // orthonormal columns
  int neighbor_count = 0;

  Eigen::MatrixXd projector(int k) const {
    const auto v = eigenvectors.col(k);
    return v * v.transpose();
  }
};

namespace detail {
/// Fixes each eigenvector's sign so its largest-magnitude component is
/// positive. Downstream math only uses v v^T, so this is pure determinism.
inline void canonicalize_sign(Eigen::MatrixXd& vectors) {
  for (Index c = 0; c < vectors.cols(); ++c) {
    Index arg = 0;
    double best = -1.0;
    for (Index rix = 0; rix < vectors.rows(); ++rix) {
      const double a = std::abs(vectors(rix, c));
      if (a > best) {
        best = a;
        arg = rix;
      }
    }
    if (vectors(arg, c) < 0.0) vectors.col(c) = -vectors.col(c);
  }
}
}  // namespace detail

/// Local covariance at sample i: mean of (x_j - x_i)(x_j - x_i)^T over the
/// radius-r ball. The ball always contains x_i itself, so the denominator is
/// at least 1; the matrix is centered at x_i, not at the neighborhood mean.
inline Eigen::MatrixXd local_covariance(const PointCloud& cloud, Index i, double r,
                                        const NeighborIndex* index = nullptr) {
  if (!(r > 0.0)) throw std::invalid_argument("local_covariance: radius must be positive");
  const Eigen::RowVectorXd center = cloud.points.row(i);
  const std::vector<Index> idx =
      index ? index->radius_query(center) : neighbors_within(cloud, center, r);
  const Index dim = cloud.dim();
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(dim, dim);
  for (Index j : idx) {
    const Eigen::VectorXd diff = (cloud.points.row(j) - center).transpose();
    sigma.noalias() += diff * diff.transpose();
  }
  sigma /= static_cast<double>(idx.size());
  return sigma;
}

/// Ascending eigen-decomposition of a symmetric matrix with canonical
/// eigenvector signs. Throws EigenFailure if the solver does not converge.
inline SpectralFrame spectral_frame(const Eigen::MatrixXd& sigma) {
  if (sigma.rows() != sigma.cols())
    throw std::invalid_argument("spectral_frame: matrix must be square");
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol)
    throw std::invalid_argument("spectral_frame: matrix is not symmetric within 1e-10");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sigma);
  if (solver.info() != Eigen::Success)
    throw EigenFailure("spectral_frame: symmetric eigensolver did not converge");
  SpectralFrame frame;
  frame.eigenvalues = solver.eigenvalues();
  frame.eigenvectors = solver.eigenvectors();
  detail::canonicalize_sign(frame.eigenvectors);
  return frame;
}

struct FrameOptions {
  NeighborAccel accel = NeighborAccel::BruteForce;
  int threads = 1;
};

/// One SpectralFrame per sample, order matching the cloud. Frames are
/// computed from this cloud once; nested fitting never updates them.
inline std::vector<SpectralFrame> precompute_frames(const PointCloud& cloud, double r,
                                                    const FrameOptions& options = {}) {
  if (!(r > 0.0)) throw std::invalid_argument("precompute_frames: radius must be positive");
  const NeighborIndex index(cloud.points, r, options.accel);
  const std::size_t n = static_cast<std::size_t>(cloud.size());
  std::vector<SpectralFrame> frames(n);
  std::vector<std::string> failures(n);
  const Index dim = cloud.dim();
  parallel_for(n, options.threads, [&](std::size_t i) {
    const Index idx = static_cast<Index>(i);
    try {
      const Eigen::RowVectorXd center = cloud.points.row(idx);
      const std::vector<Index> nbrs = index.radius_query(center);
      Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(dim, dim);
      for (Index j : nbrs) {
        const Eigen::VectorXd diff = (cloud.points.row(j) - center).transpose();
        sigma.noalias() += diff * diff.transpose();
      }
      sigma /= static_cast<double>(nbrs.size());
      frames[i] = spectral_frame(sigma);
      frames[i].neighbor_count = static_cast<int>(nbrs.size());
    } catch (const EigenFailure& e) {
      failures[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < n; ++i)
    if (!failures[i].empty())
      throw EigenFailure("sample " + std::to_string(i) + ": " + failures[i]);
  return frames;
}

}  // namespace pnsm
