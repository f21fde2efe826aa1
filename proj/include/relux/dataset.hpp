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

#ifndef RELUX_DATASET_HPP_
#define RELUX_DATASET_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relux/common.hpp"

namespace relux {

enum class Task { regression, classification };

std::string task_name(Task task);
Task task_from_name(const std::string& name);

struct Dataset {
  Matrix features;  // n x d
  Vector response;  // n
  std::vector<std::string> feature_names;
  std::string response_name = "y";
  Task task = Task::regression;

  int n() const { return static_cast<int>(features.rows()); }
  int dim() const { return static_cast<int>(features.cols()); }

  // Finiteness, matching lengths; classification labels must be 0/1.
  void validate() const;
};

// Noiseless target of the chirp benchmark at x.
double chirpwave_signal(double x);

// 1-d regression: y = sin(2*pi / (x + 0.2)) + noise, x uniform on [0, 1].
Dataset make_chirpwave(int n, double noise_sd, std::uint64_t seed);

// 2-d binary classification: two concentric circles (outer radius 1 labeled
// 0, inner radius 0.8 labeled 1), points at evenly spaced angles plus
// isotropic Gaussian noise.
Dataset make_cocircles(int n, double noise_sd, std::uint64_t seed,
                       double inner_factor = 0.8);

Dataset load_csv(const std::string& path, const std::string& response_column,
                 Task task);

std::string dataset_to_csv(const Dataset& data);

struct FeatureScale {
  double min = 0.0;
  double max = 1.0;
  bool constant = false;  // degenerate column, mapped to 0
};

// Min-max parameters learned on the training partition only.
struct ScalerRecord {
  std::vector<FeatureScale> features;
  std::vector<std::string> feature_names;
  std::optional<FeatureScale> response;
  std::string response_name = "y";

  Matrix apply_features(const Matrix& X) const;
  Vector apply_response(const Vector& y) const;
  // Inverse of the response map, for reporting on the original scale.
  double invert_response(double y_scaled) const;

  std::string to_json() const;
  static ScalerRecord from_json(const std::string& text);
};

struct SplitSpec {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
  bool scale = true;  // min-max features (and response when regression)
};

struct SplitResult {
  Dataset train;
  Dataset test;
  ScalerRecord scaler;
};

// Seeded permutation; the first floor(train_fraction * n) rows form the
// training partition. Scale parameters come from the training rows alone,
// so test features may land outside [0, 1].
SplitResult split_and_scale(const Dataset& data, const SplitSpec& spec);

std::uint64_t dataset_fingerprint(const Dataset& data);

}  // namespace relux

#endif  // RELUX_DATASET_HPP_
