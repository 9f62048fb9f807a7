/*
 * Copyright 2026 The KGEx Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef KGEX_MANIFEST_H_
#define KGEX_MANIFEST_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace kgex {

inline constexpr std::string_view kEngineVersion = "0.1.0";

// Provenance record written next to every output artifact.
struct RunManifest {
  std::string command;
  // Arguments that regenerate the outputs, with the seed made explicit.
  std::vector<std::string> replay_argv;
  nlohmann::ordered_json config;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> inputs;   // path -> digest
  std::map<std::string, std::string> outputs;  // path -> digest
  std::string engine_version{kEngineVersion};
  double wall_clock_seconds = 0.0;
};

// 64-bit FNV-1a of the file bytes, as 16 hex digits.
std::string file_digest(const std::filesystem::path& path);

std::filesystem::path manifest_path(const std::filesystem::path& output);
void write_manifest(const std::filesystem::path& path, const RunManifest& m);
RunManifest read_manifest(const std::filesystem::path& path);

}  // namespace kgex

#endif  // KGEX_MANIFEST_H_
