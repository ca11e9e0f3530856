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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "pnsm/csv.hpp"
#include "pnsm/manifest.hpp"
#include "pnsm/rng.hpp"
#include "test_util.hpp"

using namespace pnsm;

namespace {
std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}
}  // namespace

TEST_CASE("csv write-read round trip preserves every bit") {
  RandomStream rng(5);
  Eigen::MatrixXd values(40, 3);
  for (Index i = 0; i < 40; ++i) {
    values(i, 0) = rng.normal(0.0, 1.0);
    values(i, 1) = rng.uniform(-1e12, 1e12);
    values(i, 2) = rng.uniform01() * 1e-300;
  }
  values(0, 0) = 0.0;
  values(1, 0) = -0.0;
  values(2, 0) = 1.0 / 3.0;

  for (FloatFormat fmt : {FloatFormat::Shortest, FloatFormat::Digits17}) {
    const auto path = temp_file("pnsm_roundtrip.csv");
    write_csv(path.string(), {"x1", "x2", "x3"}, values, fmt);
    const CsvTable table = read_csv(path.string());
    REQUIRE(table.header == std::vector<std::string>{"x1", "x2", "x3"});
    REQUIRE(table.rows() == 40);
    for (Index i = 0; i < 40; ++i)
      for (Index j = 0; j < 3; ++j) CHECK(table.values(i, j) == values(i, j));
    std::filesystem::remove(path);
  }
}

TEST_CASE("csv writer is deterministic") {
  Eigen::MatrixXd values(3, 2);
  values << 1.5, -2.25, 1e-7, 3.0, 0.1, 9.999999999999999;
  const auto path_a = temp_file("pnsm_det_a.csv");
  const auto path_b = temp_file("pnsm_det_b.csv");
  write_csv(path_a.string(), {"x1", "x2"}, values, FloatFormat::Digits17);
  write_csv(path_b.string(), {"x1", "x2"}, values, FloatFormat::Digits17);
  std::ifstream a(path_a), b(path_b);
  const std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
  const std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
  CHECK(sa == sb);
  CHECK(!sa.empty());
  std::filesystem::remove(path_a);
  std::filesystem::remove(path_b);
}

TEST_CASE("csv parser reports malformed input") {
  const auto path = temp_file("pnsm_bad.csv");
  {
    std::ofstream out(path);
    out << "x1,x2\n1.0,2.0\n3.0\n";
  }
  CHECK_THROWS_AS(read_csv(path.string()), IoError);
  {
    std::ofstream out(path);
    out << "x1,x2\n1.0,abc\n";
  }
  CHECK_THROWS_AS(read_csv(path.string()), IoError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_csv(path.string()), IoError);  // missing file
}

TEST_CASE("coordinate column discovery") {
  const auto path = temp_file("pnsm_cols.csv");
  {
    std::ofstream out(path);
    out << "x1,x2,x3,t\n1,2,3,0.5\n4,5,6,0.7\n";
  }
  const CsvTable table = read_csv(path.string());
  CHECK(table.coordinate_columns() == std::vector<Index>{0, 1, 2});
  CHECK(table.column("t") == 3);
  CHECK(table.column("missing") == -1);
  const Eigen::MatrixXd coords = table.coordinates();
  CHECK(coords.rows() == 2);
  CHECK(coords.cols() == 3);
  CHECK(coords(1, 2) == 6.0);
  std::filesystem::remove(path);
}

TEST_CASE("random streams are portable and independent") {
  // frozen values: the generator must produce the same stream on every
  // platform and build
  RandomStream a = RandomStream::substream(42, 0);
  RandomStream b = RandomStream::substream(42, 0);
  for (int i = 0; i < 1000; ++i) CHECK(a.uniform01() == b.uniform01());

  // substreams do not collide
  RandomStream s0 = RandomStream::substream(42, 0);
  RandomStream s1 = RandomStream::substream(42, 1);
  int agree = 0;
  for (int i = 0; i < 100; ++i)
    if (s0.uniform01() == s1.uniform01()) ++agree;
  CHECK(agree == 0);

  // draw-count discipline: normal() consumes exactly two uniforms
  RandomStream c = RandomStream::substream(7, 3);
  RandomStream d = RandomStream::substream(7, 3);
  (void)c.normal(0.0, 1.0);
  (void)d.uniform01();
  (void)d.uniform01();
  CHECK(c.uniform01() == d.uniform01());
}

TEST_CASE("normal draws have the requested moments") {
  RandomStream rng(2026);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal(0.25, 2.0);
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(mean == doctest::Approx(0.25).epsilon(0.05));
  CHECK(std::sqrt(var) == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("manifest round trip") {
  RunManifest m;
  m.command = "fit";
  m.argv = {"fit", "--input", "line.csv", "--radius", "0.5"};
  m.parameters = {{"radius", 0.5}, {"dims", {2, 1}}};
  const auto path = temp_file("pnsm_manifest.json");
  write_manifest(path.string(), m);

  const RunManifest back = read_manifest(path.string());
  CHECK(back.command == "fit");
  CHECK(back.argv == m.argv);
  CHECK(back.parameters["radius"] == 0.5);
  CHECK(back.version == std::string(kVersion));

  // identical runs produce identical manifest bytes
  const auto path2 = temp_file("pnsm_manifest2.json");
  write_manifest(path2.string(), m);
  std::ifstream a(path), b(path2);
  const std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
  const std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
  CHECK(sa == sb);
  std::filesystem::remove(path);
  std::filesystem::remove(path2);
}
