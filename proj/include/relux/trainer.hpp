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

#ifndef RELUX_TRAINER_HPP_
#define RELUX_TRAINER_HPP_

#include <cstdint>
#include <vector>

#include "relux/dataset.hpp"
#include "relux/network.hpp"

namespace relux {

enum class Optimizer { adam, sgd };

std::string optimizer_name(Optimizer opt);
Optimizer optimizer_from_name(const std::string& name);

struct TrainConfig {
  std::vector<int> hidden_sizes;
  int max_epochs = 2000;
  int patience = 100;
  double validation_fraction = 0.2;
  int batch_size = 0;  // 0 selects min(200, fit rows)
  double learning_rate = 1e-3;
  Optimizer optimizer = Optimizer::adam;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrainReport {
  int epochs_run = 0;
  int best_epoch = -1;  // -1 when the initial snapshot was never beaten
  double best_val_loss = 0.0;
  std::vector<double> train_history;
  std::vector<double> val_history;
};

// Mini-batch gradient descent with a held-out validation slice for early
// stopping. The returned snapshot is the best validation loss seen,
// starting from the untrained initialization, so the result never scores
// worse on validation than the input initialization.
ReluNetwork train(const Dataset& data, const TrainConfig& config,
                  TrainReport* report = nullptr);

// Same loop, starting from an existing network's weights. Zero epochs
// returns the input unchanged.
ReluNetwork finetune(const ReluNetwork& net, const Dataset& data,
                     const TrainConfig& config, TrainReport* report = nullptr);

// He-uniform weights, zero biases; link chosen by the task.
ReluNetwork init_network(int input_dim, const std::vector<int>& hidden_sizes,
                         Link link, std::uint64_t seed);

// Mean loss under the network's link: MSE for identity, mean binomial
// log loss for logit.
double evaluate_loss(const ReluNetwork& net, const Matrix& X, const Vector& y);

}  // namespace relux

#endif  // RELUX_TRAINER_HPP_
