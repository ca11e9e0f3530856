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
#include <optional>
#include <string>
#include <vector>

#include "pnsm/errors.hpp"

namespace pnsm {

using Index = Eigen::Index;

/// An ordered list of n points in ambient dimension D, one point per row,
/// with optional per-point integer class labels and a provenance string.
struct PointCloud {
  Eigen::MatrixXd points;                   // n x D
  std::optional<std::vector<int>> labels;   // per-point class, same order as rows
  std::string source;

  PointCloud() = default;
  explicit PointCloud(Eigen::MatrixXd pts, std::string src = {})
      : points(std::move(pts)), source(std::move(src)) {}

  Index size() const { return points.rows(); }
  Index dim() const { return points.cols(); }

  /// Enforces the type invariants: n >= 1, D >= 2, all entries finite,
  /// label count (when present) matching n.
  void validate() const {
    if (points.rows() < 1) throw Error("PointCloud: need at least one point");
    if (points.cols() < 2) throw Error("PointCloud: ambient dimension must be at least 2");
    if (!points.allFinite()) throw Error("PointCloud: non-finite entry");
    if (labels && static_cast<Index>(labels->size()) != points.rows())
      throw Error("PointCloud: label count does not match point count");
  }
};

}  // namespace pnsm
