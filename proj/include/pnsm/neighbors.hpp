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
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "pnsm/types.hpp"

namespace pnsm {

/// Indices j with ||x_j - center|| <= r, ascending; ties at the boundary included.
inline std::vector<Index> neighbors_within(const PointCloud& cloud,
                                           const Eigen::Ref<const Eigen::RowVectorXd>& center,
                                           double r) {
  if (!(r > 0.0)) throw std::invalid_argument("neighbors_within: radius must be positive");
  const double r2 = r * r;
  std::vector<Index> out;
  for (Index j = 0; j < cloud.size(); ++j)
    if ((cloud.points.row(j) - center).squaredNorm() <= r2) out.push_back(j);
  return out;
}

enum class NeighborAccel { BruteForce, Grid };

/// Radius queries against a fixed cloud. The default strategy is the exactly
/// reproducible brute-force scan; a uniform grid with cell size r can be
/// selected for low ambient dimensions and returns the identical index list
/// (same distance comparison, ascending order).
class NeighborIndex {
 public:
  NeighborIndex(const Eigen::MatrixXd& pts, double r,
                NeighborAccel accel = NeighborAccel::BruteForce)
      : pts_(&pts), r_(r), r2_(r * r) {
    if (!(r > 0.0)) throw std::invalid_argument("NeighborIndex: radius must be positive");
    use_grid_ = accel == NeighborAccel::Grid && pts.cols() <= kGridMaxDim;
    if (use_grid_) build_grid();
  }

  double radius() const { return r_; }

  std::vector<Index> radius_query(const Eigen::Ref<const Eigen::RowVectorXd>& center) const {
    std::vector<Index> out;
    if (!use_grid_) {
      for (Index j = 0; j < pts_->rows(); ++j)
        if ((pts_->row(j) - center).squaredNorm() <= r2_) out.push_back(j);
      return out;
    }
    const int dim = static_cast<int>(pts_->cols());
    std::vector<std::int64_t> base(static_cast<std::size_t>(dim));
    for (int a = 0; a < dim; ++a) base[static_cast<std::size_t>(a)] = cell_coord(center(a));
    std::vector<std::int64_t> cur = base;
    visit_offsets(base, cur, 0, dim, center, out);
    std::sort(out.begin(), out.end());
    // hash collisions among visited cells can enqueue a bucket twice
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  static constexpr int kGridMaxDim = 6;

  std::int64_t cell_coord(double v) const {
    return static_cast<std::int64_t>(std::floor(v / r_));
  }

  static std::uint64_t hash_cell(const std::vector<std::int64_t>& c) {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (auto v : c) {
      std::uint64_t z = static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h ^= z * 0xbf58476d1ce4e5b9ULL;
    }
    return h;
  }

  void build_grid() {
    const int dim = static_cast<int>(pts_->cols());
    std::vector<std::int64_t> c(static_cast<std::size_t>(dim));
    for (Index j = 0; j < pts_->rows(); ++j) {
      for (int a = 0; a < dim; ++a) c[static_cast<std::size_t>(a)] = cell_coord((*pts_)(j, a));
      cells_[hash_cell(c)].push_back(j);
    }
  }

  void visit_offsets(const std::vector<std::int64_t>& base, std::vector<std::int64_t>& cur,
                     int axis, int dim, const Eigen::Ref<const Eigen::RowVectorXd>& center,
                     std::vector<Index>& out) const {
    if (axis == dim) {
      auto it = cells_.find(hash_cell(cur));
      if (it == cells_.end()) return;
      for (Index j : it->second)
        if ((pts_->row(j) - center).squaredNorm() <= r2_) out.push_back(j);
      return;
    }
    for (std::int64_t d = -1; d <= 1; ++d) {
      cur[static_cast<std::size_t>(axis)] = base[static_cast<std::size_t>(axis)] + d;
      visit_offsets(base, cur, axis + 1, dim, center, out);
    }
    cur[static_cast<std::size_t>(axis)] = base[static_cast<std::size_t>(axis)];
  }

  const Eigen::MatrixXd* pts_;
  double r_;
  double r2_;
  bool use_grid_ = false;
  // hash buckets may collide; the distance filter makes collisions harmless
  std::unordered_map<std::uint64_t, std::vector<Index>> cells_;
};

}  // namespace pnsm
