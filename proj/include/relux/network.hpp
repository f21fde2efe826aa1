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

#ifndef RELUX_NETWORK_HPP_
#define RELUX_NETWORK_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "relux/common.hpp"

namespace relux {

enum class Link { identity, logit };

std::string link_name(Link link);
Link link_from_name(const std::string& name);

// Fully connected ReLU network with a single linear output unit. Weights
// follow the convention z^(l+1) = W^(l) x^(l) + b^(l): weights[0] maps the
// input, weights[L] is the 1-row output layer.
struct ReluNetwork {
  int input_dim = 0;
  std::vector<int> hidden_sizes;
  Link link = Link::identity;
  std::vector<Matrix> weights;
  std::vector<Vector> biases;

  int depth() const { return static_cast<int>(hidden_sizes.size()); }
  int total_hidden() const;

  // Throws ShapeError/NonFiniteError when the layer chain is inconsistent.
  void validate() const;
};

struct ForwardTrace {
  double eta = 0.0;                   // linear predictor (pre-link output)
  std::vector<Vector> preactivations; // z^(1..L), before ReLU
};

ForwardTrace forward(const ReluNetwork& net, const Eigen::Ref<const Vector>& x);

double predict_eta(const ReluNetwork& net, const Eigen::Ref<const Vector>& x);

// Linear predictors for all rows of X (n x input_dim).
Vector predict_eta_batch(const ReluNetwork& net, const Matrix& X);

// Hidden-layer preactivation matrices (n x n_l) for all rows of X,
// plus the linear predictors. Shared by unwrapping and region assignment.
struct BatchTrace {
  std::vector<Matrix> preactivations;
  Vector eta;
};
BatchTrace forward_batch(const ReluNetwork& net, const Matrix& X);

// eta mapped through the link (identity, or the logistic sigmoid).
double apply_link(Link link, double eta);

std::string network_to_json(const ReluNetwork& net);
ReluNetwork network_from_json(const std::string& text);

ReluNetwork load_network(const std::string& path);
void save_network(const ReluNetwork& net, const std::string& path);

// FNV-1a over the canonical serialization.
std::uint64_t network_fingerprint(const ReluNetwork& net);

}  // namespace relux

#endif  // RELUX_NETWORK_HPP_
