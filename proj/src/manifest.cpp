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

#include "relux/manifest.hpp"

#include <json.hpp>

#include "relux/common.hpp"

namespace relux {

std::string manifest_to_json(const RunManifest& manifest) {
  nlohmann::ordered_json doc;
  doc["tool"] = kToolName;
  doc["version"] = manifest.tool_version.empty() ? kToolVersion
                                                 : manifest.tool_version;
  doc["command"] = manifest.command;
  doc["seed"] = manifest.seed;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [key, value] : manifest.config) config[key] = value;
  doc["config"] = std::move(config);
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  for (const auto& [path, hash] : manifest.inputs) inputs[path] = hash;
  doc["inputs"] = std::move(inputs);
  doc["outputs"] = manifest.outputs;
  doc["wall_time_seconds"] = manifest.wall_time_seconds;
  return doc.dump(2) + "\n";
}

}  // namespace relux
