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
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "pnsm/csv.hpp"
#include "pnsm/errors.hpp"
#include "pnsm/parallel.hpp"
#include "pnsm/types.hpp"

namespace pnsm {

/// Average silhouette index over all points with the standard definition:
/// s_i = (b_i - a_i) / max(a_i, b_i), a_i the mean intra-cluster distance
/// excluding self, b_i the smallest mean distance to another cluster.
/// Singleton clusters contribute s_i = 0. Distances are ambient Euclidean.
inline double avg_silhouette(const PointCloud& cloud) {
  if (!cloud.labels) throw LabelError("avg_silhouette: cloud carries no labels");
  const auto& labels = *cloud.labels;
  const Index n = cloud.size();

  std::map<int, Index> cluster_sizes;
  for (int l : labels) ++cluster_sizes[l];
  if (cluster_sizes.size() < 2)
    throw LabelError("avg_silhouette: need at least two distinct labels");

  double total = 0.0;
  std::vector<double> dist(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j)
      dist[static_cast<std::size_t>(j)] = (cloud.points.row(i) - cloud.points.row(j)).norm();

    const int own = labels[static_cast<std::size_t>(i)];
    if (cluster_sizes[own] == 1) continue;  // singleton: s_i = 0

    std::map<int, double> sums;
    for (Index j = 0; j < n; ++j) sums[labels[static_cast<std::size_t>(j)]] += dist[static_cast<std::size_t>(j)];

    const double a = sums[own] / static_cast<double>(cluster_sizes[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (const auto& [label, sum] : sums) {
      if (label == own) continue;
      b = std::min(b, sum / static_cast<double>(cluster_sizes[label]));
    }
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(n);
}

namespace detail {

/// Symmetrized k-nearest-neighbor graph with Euclidean edge weights.
/// Neighbors are ranked by (squared distance, index) so ties are deterministic.
inline std::vector<std::vector<std::pair<Index, double>>> knn_graph(const Eigen::MatrixXd& pts,
                                                                    int k) {
  const Index n = pts.rows();
  const Index kk = std::min<Index>(k, n - 1);
  std::vector<std::vector<std::pair<Index, double>>> adjacency(static_cast<std::size_t>(n));

  std::vector<std::pair<double, Index>> order(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j)
      order[static_cast<std::size_t>(j)] = {(pts.row(i) - pts.row(j)).squaredNorm(), j};
    order[static_cast<std::size_t>(i)].first = std::numeric_limits<double>::infinity();  // exclude self
    std::partial_sort(order.begin(), order.begin() + kk, order.end());
    for (Index m = 0; m < kk; ++m) {
      const auto [d2, j] = order[static_cast<std::size_t>(m)];
      const double w = std::sqrt(d2);
      adjacency[static_cast<std::size_t>(i)].push_back({j, w});
      adjacency[static_cast<std::size_t>(j)].push_back({i, w});  // union symmetrization
    }
  }
  for (auto& edges : adjacency) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  }
  return adjacency;
}

inline std::vector<Index> largest_component(
    const std::vector<std::vector<std::pair<Index, double>>>& adjacency) {
  const Index n = static_cast<Index>(adjacency.size());
  std::vector<int> component(static_cast<std::size_t>(n), -1);
  int n_components = 0;
  for (Index s = 0; s < n; ++s) {
    if (component[static_cast<std::size_t>(s)] >= 0) continue;
    std::vector<Index> stack{s};
    component[static_cast<std::size_t>(s)] = n_components;
    while (!stack.empty()) {
      const Index v = stack.back();
      stack.pop_back();
      for (const auto& [w, _] : adjacency[static_cast<std::size_t>(v)]) {
        if (component[static_cast<std::size_t>(w)] < 0) {
          component[static_cast<std::size_t>(w)] = n_components;
          stack.push_back(w);
        }
      }
    }
    ++n_components;
  }
  std::vector<Index> sizes(static_cast<std::size_t>(n_components), 0);
  for (Index i = 0; i < n; ++i) ++sizes[static_cast<std::size_t>(component[static_cast<std::size_t>(i)])];
  const int best = static_cast<int>(
      std::max_element(sizes.begin(), sizes.end()) - sizes.begin());  // first largest
  std::vector<Index> members;
  for (Index i = 0; i < n; ++i)
    if (component[static_cast<std::size_t>(i)] == best) members.push_back(i);
  return members;
}

inline std::vector<double> dijkstra(const std::vector<std::vector<std::pair<Index, double>>>& adj,
                                    Index source) {
  const std::size_t n = adj.size();
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  using Entry = std::pair<double, Index>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  dist[static_cast<std::size_t>(source)] = 0.0;
  queue.push({0.0, source});
  while (!queue.empty()) {
    const auto [d, v] = queue.top();
    queue.pop();
    if (d > dist[static_cast<std::size_t>(v)]) continue;
    for (const auto& [w, len] : adj[static_cast<std::size_t>(v)]) {
      const double cand = d + len;
      if (cand < dist[static_cast<std::size_t>(w)]) {
        dist[static_cast<std::size_t>(w)] = cand;
        queue.push({cand, w});
      }
    }
  }
  return dist;
}

}  // namespace detail

struct VariationResult {
  double total = 0.0;       // min over base points of sum of squared graph geodesics
  bool connected = true;    // false means the largest component was used
  Index component_size = 0;
};

/// Total variation of a cloud estimated as the minimum over base points j of
/// sum_i g(x_j, x_i)^2, with g the shortest-path distance on the symmetrized
/// k-nearest-neighbor graph. A disconnected graph falls back to the largest
/// component and flags the result.
inline VariationResult geodesic_variation(const PointCloud& cloud, int k_neighbors, int threads = 1) {
  if (k_neighbors < 1) throw std::invalid_argument("geodesic_variation: k must be positive");
  const Index n = cloud.size();
  VariationResult res;
  if (n == 1) {
    res.component_size = 1;
    return res;
  }
  const auto adjacency = detail::knn_graph(cloud.points, k_neighbors);
  const std::vector<Index> members = detail::largest_component(adjacency);
  res.connected = static_cast<Index>(members.size()) == n;
  res.component_size = static_cast<Index>(members.size());

  std::vector<double> sums(members.size(), std::numeric_limits<double>::infinity());
  parallel_for(members.size(), threads, [&](std::size_t m) {
    const std::vector<double> dist = detail::dijkstra(adjacency, members[m]);
    double sum = 0.0;
    for (Index i : members) sum += dist[static_cast<std::size_t>(i)] * dist[static_cast<std::size_t>(i)];
    sums[m] = sum;
  });
  res.total = *std::min_element(sums.begin(), sums.end());
  return res;
}

/// Variation of `cloud` relative to a baseline total of the same functional.
inline double prop_variation(const PointCloud& cloud, double baseline_total, int k_neighbors,
                             VariationResult* detail_out = nullptr, int threads = 1) {
  if (!(baseline_total > 0.0))
    throw std::invalid_argument("prop_variation: baseline total must be positive");
  const VariationResult v = geodesic_variation(cloud, k_neighbors, threads);
  if (detail_out) *detail_out = v;
  return v.total / baseline_total;
}

/// Mean squared ambient displacement between paired clouds.
inline double mse(const PointCloud& original, const PointCloud& projected) {
  if (original.size() != projected.size() || original.dim() != projected.dim())
    throw ShapeMismatch("mse: clouds differ in shape");
  double total = 0.0;
  for (Index i = 0; i < original.size(); ++i)
    total += (original.points.row(i) - projected.points.row(i)).squaredNorm();
  return total / static_cast<double>(original.size());
}

struct FilterResult {
  PointCloud kept;
  std::vector<Index> removed;  // ascending original indices
};

/// Keeps points whose radius-r neighbor count (excluding self) reaches
/// min_neighbors. Single pass, never iterated.
inline FilterResult outlier_filter(const PointCloud& cloud, double r, int min_neighbors) {
  if (!(r > 0.0)) throw std::invalid_argument("outlier_filter: radius must be positive");
  if (min_neighbors < 0) throw std::invalid_argument("outlier_filter: min_neighbors must be >= 0");
  const Index n = cloud.size();
  const double r2 = r * r;
  std::vector<char> keep(static_cast<std::size_t>(n), 0);
  for (Index i = 0; i < n; ++i) {
    int count = 0;
    for (Index j = 0; j < n; ++j) {
      if (j == i) continue;
      if ((cloud.points.row(i) - cloud.points.row(j)).squaredNorm() <= r2) ++count;
    }
    keep[static_cast<std::size_t>(i)] = count >= min_neighbors ? 1 : 0;
  }

  FilterResult res;
  Index kept_count = 0;
  for (char k : keep) kept_count += k;
  res.kept.points.resize(kept_count, cloud.dim());
  res.kept.source = cloud.source;
  if (cloud.labels) res.kept.labels.emplace();
  Index w = 0;
  for (Index i = 0; i < n; ++i) {
    if (keep[static_cast<std::size_t>(i)]) {
      res.kept.points.row(w++) = cloud.points.row(i);
      if (cloud.labels) res.kept.labels->push_back((*cloud.labels)[static_cast<std::size_t>(i)]);
    } else {
      res.removed.push_back(i);
    }
  }
  return res;
}

/// One metric row per fitted dimension plus run metadata.
struct MetricRow {
  int d = 0;
  std::optional<double> silhouette;
  double variation_ratio = 0.0;
  double mse_value = 0.0;
  bool graph_connected = true;
};

struct MetricReport {
  std::vector<MetricRow> rows;                    // descending d
  std::vector<std::pair<std::string, std::string>> metadata;
};

/// CSV serialization: one row per dimension; the silhouette cell is empty
/// when no labels were supplied.
inline void write_metric_csv(const std::string& path, const MetricReport& report,
                             FloatFormat fmt = FloatFormat::Shortest) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "d,avg_silhouette,prop_variation,mse\n";
  for (const auto& row : report.rows) {
    out << row.d << ',';
    if (row.silhouette) out << format_double(*row.silhouette, fmt);
    out << ',' << format_double(row.variation_ratio, fmt) << ','
        << format_double(row.mse_value, fmt) << '\n';
  }
  if (!out) throw IoError("write to '" + path + "' failed");
}

/// Structured text report: metadata block followed by the metric table.
inline void write_metric_text(const std::string& path, const MetricReport& report,
                              FloatFormat fmt = FloatFormat::Shortest) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "metric report\n";
  for (const auto& [key, value] : report.metadata) out << "  " << key << ": " << value << '\n';
  out << '\n' << "  d  avg_silhouette  prop_variation  mse\n";
  for (const auto& row : report.rows) {
    out << "  " << row.d << "  ";
    out << (row.silhouette ? format_double(*row.silhouette, fmt) : std::string("-"));
    out << "  " << format_double(row.variation_ratio, fmt) << "  "
        << format_double(row.mse_value, fmt);
    if (!row.graph_connected) out << "  [graph disconnected: largest component used]";
    out << '\n';
  }
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace pnsm
