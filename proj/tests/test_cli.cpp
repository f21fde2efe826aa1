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

#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oracles.hpp"
#include "relux/cli.hpp"
#include "relux/common.hpp"
#include "relux/io.hpp"
#include "relux/network.hpp"

namespace fs = std::filesystem;
using namespace relux;

namespace {

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "relu-unwrap");
  std::vector<char*> argv;
  argv.reserve(args.size());
  for (auto& a : args) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "relux_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// manifest.json minus its only nondeterministic field.
std::string strip_wall_time(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.find("wall_time_seconds") != std::string::npos) continue;
    out += line;
    out += '\n';
  }
  return out;
}

std::map<std::string, std::string> slurp_dir(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::string content = read_file(entry.path().string());
    if (entry.path().filename() == "manifest.json")
      content = strip_wall_time(content);
    files[entry.path().filename().string()] = std::move(content);
  }
  return files;
}

void write_corner_data(const fs::path& path) {
  std::string csv = "x1,x2,y\n";
  for (double x1 : {-0.5, 0.5}) {
    for (double x2 : {-0.5, 0.5}) {
      for (double jitter : {0.0, 0.05}) {
        csv += format_double(x1 + jitter) + "," + format_double(x2 + jitter) +
               ",1\n";
      }
    }
  }
  write_file_atomic(path.string(), csv);
}

}  // namespace

TEST_CASE("train emits its artifact set with a complete manifest") {
  const fs::path dir = fresh_dir("train");
  const int rc = run({"train", "--synthetic", "chirpwave", "--n", "200",
                      "--hidden", "8", "--max-epochs", "30", "--patience",
                      "30", "--batch", "32", "--seed", "1", "--out-dir",
                      dir.string()});
  REQUIRE(rc == 0);

  const auto manifest =
      nlohmann::json::parse(read_file((dir / "manifest.json").string()));
  CHECK(manifest.at("tool") == "relu-unwrap");
  CHECK(manifest.at("command") == "train");
  CHECK(manifest.at("seed") == 1);
  CHECK(manifest.at("wall_time_seconds").is_number());

  const auto outputs = manifest.at("outputs").get<std::vector<std::string>>();
  REQUIRE(!outputs.empty());
  CHECK(outputs.back() == "manifest.json");
  for (const std::string& name : outputs) CHECK(fs::exists(dir / name));
  // Every file on disk is declared, and vice versa.
  std::size_t on_disk = 0;
  for ([[maybe_unused]] const auto& entry : fs::directory_iterator(dir)) ++on_disk;
  CHECK(on_disk == outputs.size());
  for (const char* name :
       {"train.csv", "test.csv", "scaler.json", "model.json", "training.json"})
    CHECK(std::count(outputs.begin(), outputs.end(), name) == 1);
}

TEST_CASE("unwrap reports the toy model's populated regions") {
  const fs::path dir = fresh_dir("unwrap");
  write_file_atomic((dir / "model.json").string(),
                    network_to_json(oracles::toy_net()));
  write_corner_data(dir / "data.csv");
  const int rc = run({"unwrap", "--model", (dir / "model.json").string(),
                      "--data", (dir / "data.csv").string(), "--task",
                      "regression", "--out-dir", dir.string()});
  REQUIRE(rc == 0);

  const std::string regions = read_file((dir / "regions.csv").string());
  // The four corner quadrants differ already at layer 1, so at least four
  // regions; layer-2 cuts may split them further, up to one per point.
  const auto lines = std::count(regions.begin(), regions.end(), '\n');
  CHECK(lines >= 5);
  CHECK(lines <= 9);
  const std::string llms = read_file((dir / "llms.csv").string());
  CHECK(llms.rfind("region,pattern,count,single,intercept,x1,x2\n", 0) == 0);

  const auto manifest =
      nlohmann::json::parse(read_file((dir / "manifest.json").string()));
  CHECK(!manifest.at("inputs").empty());
}

TEST_CASE("pipeline outputs are byte-identical across thread caps") {
  // Same directory for both passes so the argument echo in the manifest
  // matches too; only the wall-time line is exempt.
  const fs::path dir = fresh_dir("det");

  auto pipeline = [&dir] {
    REQUIRE(run({"train", "--synthetic", "cocircles", "--n", "240", "--hidden",
                 "8,8", "--max-epochs", "40", "--patience", "40", "--batch",
                 "32", "--seed", "7", "--out-dir", dir.string()}) == 0);
    REQUIRE(run({"unwrap", "--model", (dir / "model.json").string(), "--data",
                 (dir / "train.csv").string(), "--task", "classification",
                 "--out-dir", dir.string()}) == 0);
    REQUIRE(run({"diagnose", "--model", (dir / "model.json").string(),
                 "--data", (dir / "train.csv").string(), "--task",
                 "classification", "--top-k", "5", "--out-dir",
                 dir.string()}) == 0);
  };

  setenv("RELU_UNWRAP_THREADS", "1", 1);
  pipeline();
  const auto files_a = slurp_dir(dir);
  fs::remove_all(dir);
  fs::create_directories(dir);
  setenv("RELU_UNWRAP_THREADS", "4", 1);
  pipeline();
  unsetenv("RELU_UNWRAP_THREADS");
  const auto files_b = slurp_dir(dir);

  REQUIRE(files_a.size() == files_b.size());
  for (const auto& [name, content] : files_a) {
    REQUIRE(files_b.count(name) == 1);
    CHECK_MESSAGE(files_b.at(name) == content, name, " differs across runs");
  }
}

TEST_CASE("regionmap renders the toy model") {
  const fs::path dir = fresh_dir("regionmap");
  write_file_atomic((dir / "model.json").string(),
                    network_to_json(oracles::toy_net()));
  const int rc = run({"regionmap", "--model", (dir / "model.json").string(),
                      "--bounds", "-1,1", "--resolution", "128", "--out-dir",
                      dir.string()});
  REQUIRE(rc == 0);
  const std::string svg = read_file((dir / "regionmap.svg").string());
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("resolution: 128x128") != std::string::npos);
}

TEST_CASE("usage problems exit with code 2") {
  CHECK(run({"no-such-command"}) != 0);
  CHECK(run({"unwrap"}) != 0);  // --model and --data are required
  const fs::path dir = fresh_dir("usage");
  write_file_atomic((dir / "model.json").string(),
                    network_to_json(oracles::toy_net()));
  write_corner_data(dir / "data.csv");
  // Penalized inference without a bootstrap count is refused.
  CHECK(run({"infer", "--model", (dir / "model.json").string(), "--data",
             (dir / "data.csv").string(), "--refit", "l1", "--strength",
             "0.1", "--out-dir", dir.string()}) == 2);
  // Malformed numeric list.
  CHECK(run({"regionmap", "--model", (dir / "model.json").string(),
             "--bounds", "1,banana", "--out-dir", dir.string()}) == 2);
}

TEST_CASE("module failures exit with code 1") {
  const fs::path dir = fresh_dir("module_err");
  CHECK(run({"unwrap", "--model", (dir / "missing.json").string(), "--data",
             (dir / "missing.csv").string(), "--task", "regression",
             "--out-dir", dir.string()}) == 1);
  // Corrupt model file.
  write_file_atomic((dir / "bad.json").string(), "{not json");
  write_corner_data(dir / "data.csv");
  CHECK(run({"unwrap", "--model", (dir / "bad.json").string(), "--data",
             (dir / "data.csv").string(), "--task", "regression", "--out-dir",
             dir.string()}) == 1);
}

TEST_CASE("infer writes an inference table for the largest region") {
  const fs::path dir = fresh_dir("infer");
  REQUIRE(run({"train", "--synthetic", "cocircles", "--n", "240", "--hidden",
               "8", "--max-epochs", "40", "--patience", "40", "--batch", "32",
               "--seed", "9", "--out-dir", dir.string()}) == 0);
  REQUIRE(run({"infer", "--model", (dir / "model.json").string(), "--data",
               (dir / "train.csv").string(), "--task", "classification",
               "--region-id", "0", "--out-dir", dir.string()}) == 0);
  const std::string csv = read_file((dir / "inference.csv").string());
  CHECK(csv.rfind("coef,std_err,z,p-value,[0.025,0.975]\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);  // header + b, x1, x2
}
