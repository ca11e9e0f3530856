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
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "pnsm/errors.hpp"
#include "pnsm/types.hpp"

namespace pnsm {

/// Decimal rendering of doubles. Shortest emits the shortest string that
/// parses back to the same bits; Digits17 always prints 17 significant digits.
/// Both round-trip exactly.
enum class FloatFormat { Shortest, Digits17 };

inline std::string format_double(double v, FloatFormat fmt) {
  char buf[64];
  std::to_chars_result res =
      fmt == FloatFormat::Shortest
          ? std::to_chars(buf, buf + sizeof(buf), v)
          : std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text, std::size_t line_no) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last)
    throw IoError("CSV: cannot parse number '" + std::string(text) + "' at line " +
                  std::to_string(line_no));
  return v;
}

/// A parsed CSV file: one header row of column names plus a dense numeric body.
struct CsvTable {
  std::vector<std::string> header;
  Eigen::MatrixXd values;  // rows x header.size()

  Index rows() const { return values.rows(); }
  Index cols() const { return values.cols(); }

  /// Index of a named column, or -1 when absent.
  Index column(const std::string& name) const {
    for (std::size_t c = 0; c < header.size(); ++c)
      if (header[c] == name) return static_cast<Index>(c);
    return -1;
  }

  /// Indices of the coordinate columns x1, x2, ... in order. They must be
  /// present as a contiguous run starting at x1.
  std::vector<Index> coordinate_columns() const {
    std::vector<Index> out;
    for (int k = 1;; ++k) {
      Index c = column("x" + std::to_string(k));
      if (c < 0) break;
      out.push_back(c);
    }
    if (out.empty()) throw IoError("CSV: no coordinate columns x1, x2, ... found");
    return out;
  }

  Eigen::MatrixXd coordinates() const {
    auto cols_idx = coordinate_columns();
    Eigen::MatrixXd out(values.rows(), static_cast<Index>(cols_idx.size()));
    for (std::size_t k = 0; k < cols_idx.size(); ++k) out.col(static_cast<Index>(k)) = values.col(cols_idx[k]);
    return out;
  }
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::string line;
  if (!std::getline(in, line)) throw IoError("'" + path + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  CsvTable table;
  table.header = split_csv_line(line);
  const std::size_t width = table.header.size();
  if (width == 0) throw IoError("'" + path + "': empty header");

  std::vector<double> body;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != width)
      throw IoError("'" + path + "': line " + std::to_string(line_no) + " has " +
                    std::to_string(cells.size()) + " cells, expected " + std::to_string(width));
    for (auto& c : cells) body.push_back(parse_double(c, line_no));
  }
  const Index n = static_cast<Index>(body.size() / width);
  table.values.resize(n, static_cast<Index>(width));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < static_cast<Index>(width); ++j)
      table.values(i, j) = body[static_cast<std::size_t>(i) * width + static_cast<std::size_t>(j)];
  return table;
}

inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const Eigen::MatrixXd& values, FloatFormat fmt) {
  if (static_cast<Index>(header.size()) != values.cols())
    throw IoError("CSV write: header width does not match value columns");
  std::ofstream out(path, std::ios::binary);  // binary: "\n" on every platform
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c) out << ',';
    out << header[c];
  }
  out << '\n';
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < values.cols(); ++j) {
      if (j) out << ',';
      out << format_double(values(i, j), fmt);
    }
    out << '\n';
  }
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace pnsm
