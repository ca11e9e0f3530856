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

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pnsm/errors.hpp"
#include "pnsm/version.hpp"

namespace pnsm {

/// Everything needed to replay a CLI run bit-identically: the subcommand, the
/// fully resolved argument vector, and the resolved parameter set. No clocks,
/// no hostnames — manifests of identical runs are identical bytes.
struct RunManifest {
  std::string command;
  std::vector<std::string> argv;  // subcommand followed by resolved flags
  nlohmann::json parameters;
  std::string version;
};

inline void write_manifest(const std::string& path, const RunManifest& manifest) {
  nlohmann::json doc;
  doc["argv"] = manifest.argv;
  doc["command"] = manifest.command;
  doc["parameters"] = manifest.parameters;
  doc["version"] = manifest.version.empty() ? std::string(kVersion) : manifest.version;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open manifest '" + path + "' for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("write to manifest '" + path + "' failed");
}

inline RunManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw IoError("manifest '" + path + "': " + e.what());
  }
  RunManifest m;
  m.command = doc.value("command", "");
  m.argv = doc.value("argv", std::vector<std::string>{});
  m.parameters = doc.value("parameters", nlohmann::json::object());
  m.version = doc.value("version", "");
  return m;
}

}  // namespace pnsm
