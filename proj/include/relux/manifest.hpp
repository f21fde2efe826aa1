// Copyright 2026 the relu-unwrap authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RELUX_MANIFEST_HPP_
#define RELUX_MANIFEST_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace relux {

// Provenance record written once per CLI command, after every other file.
// `wall_time_seconds` is the only field that varies between identical runs.
struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> config;  // resolved flags
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> inputs;  // path -> hash
  std::vector<std::string> outputs;  // emission order, manifest itself last
  std::string tool_version;
  double wall_time_seconds = 0.0;
};

std::string manifest_to_json(const RunManifest& manifest);

}  // namespace relux

#endif  // RELUX_MANIFEST_HPP_
