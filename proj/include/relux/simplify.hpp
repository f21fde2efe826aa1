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

#ifndef RELUX_SIMPLIFY_HPP_
#define RELUX_SIMPLIFY_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relux/glm.hpp"
#include "relux/trainer.hpp"
#include "relux/unwrapper.hpp"

namespace relux {

struct MergeConfig {
  std::vector<int> k_grid = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 15, 20};
  int neighbors = 0;  // 0 selects ceil(0.01 * region count)
  int tau = 30;       // clusters below this instance count get absorbed
  glm::Penalty refit_penalty = glm::Penalty::none;
  double refit_strength = 0.0;
  double validation_fraction = 0.2;  // held out of refits during K search
  std::uint64_t seed = 0;
  bool standardize = false;  // z-score coefficient columns before clustering

  void validate() const;
};

struct MergedCluster {
  std::vector<int> region_ids;  // into UnwrapResult.regions, ascending
  glm::GlmFit refit;
  bool refit_fallback = false;  // singular refit recovered with a small ridge
  int count = 0;                // member instances
  double response_mean = 0.0;
  double response_std = 0.0;
  std::optional<double> local_perf;   // refit on member instances
  std::optional<double> global_perf;  // refit on the whole dataset
};

struct MergedModel {
  std::vector<MergedCluster> clusters;  // count desc, ties by first region id
  std::vector<int> region_to_cluster;
  int chosen_k = 0;             // grid value picked by validation search
  int effective_neighbors = 0;  // T after connectivity repair
  Link link = Link::identity;
  Task task = Task::regression;
  std::uint64_t net_fingerprint = 0;
  std::uint64_t data_fingerprint = 0;
  MergeConfig config;
};

// Connectivity-constrained Ward clustering of the per-region coefficient
// vectors, small-cluster absorption, per-cluster GLM refits, and K chosen
// from the grid by validation performance of the piecewise refit.
MergedModel merge(const UnwrapResult& result, const Dataset& data,
                  const MergeConfig& config);

// Known pattern -> its cluster's refit. Unseen pattern -> majority cluster
// among the T nearest region centers measured from x (ties to the cluster
// of the nearest center). Returns the linear predictor.
double predict_merged(const MergedModel& model, const UnwrapResult& result,
                      const ReluNetwork& net, const Eigen::Ref<const Vector>& x);

Vector predict_merged_batch(const MergedModel& model, const UnwrapResult& result,
                            const ReluNetwork& net, const Matrix& X);

struct FlattenResult {
  ReluNetwork net;
  bool output_fallback = false;  // output GLM needed the ridge fallback
};

// Single-hidden-layer network: one hidden unit per cluster, initialized
// from the cluster refits; output layer fit by GLM on the propagated
// activations, then fine-tuned.
FlattenResult flatten(const MergedModel& model, const Dataset& data,
                      const TrainConfig& finetune_config);

struct ModelComparison {
  std::optional<double> relu;
  std::optional<double> merged;
  std::optional<double> flattened;
  std::optional<double> slfn;
  int n_cluster = 0;
  bool auc_metric = false;
};

std::string compare_csv(const ModelComparison& comparison);

std::string merged_to_json(const MergedModel& model);

// Requires the same unwrap result the model was built from; fingerprints
// are checked.
MergedModel merged_from_json(const std::string& text, const UnwrapResult& result);

}  // namespace relux

#endif  // RELUX_SIMPLIFY_HPP_
