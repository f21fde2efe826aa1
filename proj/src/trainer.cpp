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

#include "relux/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "relux/rng.hpp"

namespace relux {

namespace {

constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

// Numerically stable binomial log loss of a logit.
double bce_logit(double eta, double y) {
  return std::max(eta, 0.0) - y * eta + std::log1p(std::exp(-std::abs(eta)));
}

struct Snapshot {
  std::vector<Matrix> weights;
  std::vector<Vector> biases;
};

bool params_finite(const ReluNetwork& net) {
  for (const Matrix& w : net.weights) {
    if (!w.allFinite()) return false;
  }
  for (const Vector& b : net.biases) {
    if (!b.allFinite()) return false;
  }
  return true;
}

ReluNetwork fit_loop(ReluNetwork net, const Dataset& data,
                     const TrainConfig& cfg, TrainReport* report) {
  const int n = data.n();
  const int n_val = static_cast<int>(std::floor(cfg.validation_fraction * n));
  const int n_fit = n - n_val;
  if (n_fit < 1) throw DataError("trainer", "no rows left to fit after validation split");

  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  {
    Rng split_rng(derive_seed(cfg.seed, 3));
    split_rng.shuffle(perm);
  }
  Matrix x_fit(n_fit, data.dim()), x_val(n_val, data.dim());
  Vector y_fit(n_fit), y_val(n_val);
  for (int i = 0; i < n_fit; ++i) {
    x_fit.row(i) = data.features.row(perm[static_cast<std::size_t>(i)]);
    y_fit(i) = data.response(perm[static_cast<std::size_t>(i)]);
  }
  for (int i = 0; i < n_val; ++i) {
    x_val.row(i) = data.features.row(perm[static_cast<std::size_t>(n_fit + i)]);
    y_val(i) = data.response(perm[static_cast<std::size_t>(n_fit + i)]);
  }

  const int batch = cfg.batch_size > 0 ? std::min(cfg.batch_size, n_fit)
                                       : std::min(200, n_fit);
  const std::size_t layers = net.weights.size();
  const bool logit = net.link == Link::logit;

  // Adam moments, laid out like the parameters.
  std::vector<Matrix> m_w(layers), v_w(layers);
  std::vector<Vector> m_b(layers), v_b(layers);
  for (std::size_t l = 0; l < layers; ++l) {
    m_w[l] = Matrix::Zero(net.weights[l].rows(), net.weights[l].cols());
    v_w[l] = m_w[l];
    m_b[l] = Vector::Zero(net.biases[l].size());
    v_b[l] = m_b[l];
  }
  long step = 0;

  Snapshot best{net.weights, net.biases};
  double best_val = n_val > 0 ? evaluate_loss(net, x_val, y_val)
                              : std::numeric_limits<double>::infinity();
  TrainReport local;
  local.best_val_loss = best_val;

  Rng batch_rng(derive_seed(cfg.seed, 2));
  std::vector<int> order(static_cast<std::size_t>(n_fit));
  std::iota(order.begin(), order.end(), 0);

  std::vector<Matrix> acts(layers);  // inputs of each layer
  std::vector<Matrix> preacts(layers);
  int bad_epochs = 0;

  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    batch_rng.shuffle(order);
    double loss_sum = 0.0;

    for (int start = 0; start < n_fit; start += batch) {
      const int count = std::min(batch, n_fit - start);
      Matrix xb(count, data.dim());
      Vector yb(count);
      for (int r = 0; r < count; ++r) {
        xb.row(r) = x_fit.row(order[static_cast<std::size_t>(start + r)]);
        yb(r) = y_fit(order[static_cast<std::size_t>(start + r)]);
      }

      // Forward, keeping the per-layer inputs for backprop.
      Matrix a = xb;
      for (std::size_t l = 0; l < layers; ++l) {
        acts[l] = a;
        preacts[l] = (a * net.weights[l].transpose()).rowwise() +
                     net.biases[l].transpose();
        a = l + 1 < layers ? preacts[l].cwiseMax(0.0) : preacts[l];
      }
      const Vector eta = a.col(0);

      // Gradient of the mean loss w.r.t. eta.
      Matrix grad_out(count, 1);
      if (logit) {
        for (int r = 0; r < count; ++r) {
          const double p = 1.0 / (1.0 + std::exp(-eta(r)));
          loss_sum += bce_logit(eta(r), yb(r));
          grad_out(r, 0) = (p - yb(r)) / count;
        }
      } else {
        for (int r = 0; r < count; ++r) {
          const double d = eta(r) - yb(r);
          loss_sum += d * d;
          grad_out(r, 0) = 2.0 * d / count;
        }
      }

      ++step;
      Matrix g = grad_out;
      for (std::size_t li = layers; li-- > 0;) {
        const Matrix grad_w = g.transpose() * acts[li];
        const Vector grad_b = g.colwise().sum().transpose();
        if (li > 0) {
          g = (g * net.weights[li]).cwiseProduct(
              (preacts[li - 1].array() > 0.0).cast<double>().matrix());
        }
        if (cfg.optimizer == Optimizer::adam) {
          const double bc1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(step));
          const double bc2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(step));
          m_w[li] = kAdamBeta1 * m_w[li] + (1.0 - kAdamBeta1) * grad_w;
          v_w[li] = kAdamBeta2 * v_w[li] + (1.0 - kAdamBeta2) * grad_w.cwiseProduct(grad_w);
          net.weights[li] -= cfg.learning_rate *
                             (m_w[li] / bc1)
                                 .cwiseQuotient(((v_w[li] / bc2).cwiseSqrt().array() + kAdamEps)
                                                    .matrix());
          m_b[li] = kAdamBeta1 * m_b[li] + (1.0 - kAdamBeta1) * grad_b;
          v_b[li] = kAdamBeta2 * v_b[li] + (1.0 - kAdamBeta2) * grad_b.cwiseProduct(grad_b);
          net.biases[li] -= cfg.learning_rate *
                            (m_b[li] / bc1)
                                .cwiseQuotient(((v_b[li] / bc2).cwiseSqrt().array() + kAdamEps)
                                                   .matrix());
        } else {
          net.weights[li] -= cfg.learning_rate * grad_w;
          net.biases[li] -= cfg.learning_rate * grad_b;
        }
      }
    }

    const double train_loss = loss_sum / n_fit;
    if (!std::isfinite(train_loss) || !params_finite(net))
      throw TrainError("trainer", "training diverged (non-finite loss)", epoch);

    const double val_loss =
        n_val > 0 ? evaluate_loss(net, x_val, y_val) : train_loss;
    local.train_history.push_back(train_loss);
    local.val_history.push_back(val_loss);
    local.epochs_run = epoch + 1;

    if (val_loss < best_val) {
      best_val = val_loss;
      best.weights = net.weights;
      best.biases = net.biases;
      local.best_epoch = epoch;
      bad_epochs = 0;
    } else {
      ++bad_epochs;
      if (bad_epochs > cfg.patience) break;
    }
  }

  net.weights = std::move(best.weights);
  net.biases = std::move(best.biases);
  local.best_val_loss = best_val;
  if (report) *report = std::move(local);
  return net;
}

}  // namespace

std::string optimizer_name(Optimizer opt) {
  return opt == Optimizer::adam ? "adam" : "sgd";
}

Optimizer optimizer_from_name(const std::string& name) {
  if (name == "adam") return Optimizer::adam;
  if (name == "sgd") return Optimizer::sgd;
  throw UsageError("trainer", "unknown optimizer: " + name);
}

void TrainConfig::validate() const {
  if (max_epochs < 0) throw DataError("trainer", "max_epochs must be >= 0");
  if (patience < 0 || patience > max_epochs)
    throw DataError("trainer", "patience must be in [0, max_epochs]");
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0))
    throw DataError("trainer", "validation_fraction must be in (0, 1)");
  if (batch_size < 0) throw DataError("trainer", "batch_size must be >= 0");
  if (!(learning_rate > 0.0)) throw DataError("trainer", "learning_rate must be > 0");
}

ReluNetwork init_network(int input_dim, const std::vector<int>& hidden_sizes,
                         Link link, std::uint64_t seed) {
  if (input_dim < 1) throw ShapeError("trainer", "input_dim must be >= 1");
  if (hidden_sizes.empty())
    throw ShapeError("trainer", "at least one hidden layer required");
  ReluNetwork net;
  net.input_dim = input_dim;
  net.hidden_sizes = hidden_sizes;
  net.link = link;
  Rng rng(derive_seed(seed, 1));
  int fan_in = input_dim;
  for (std::size_t l = 0; l <= hidden_sizes.size(); ++l) {
    const int fan_out =
        l < hidden_sizes.size() ? hidden_sizes[l] : 1;
    const double limit = std::sqrt(6.0 / fan_in);
    Matrix w(fan_out, fan_in);
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = rng.uniform(-limit, limit);
    }
    net.weights.push_back(std::move(w));
    net.biases.push_back(Vector::Zero(fan_out));
    fan_in = fan_out;
  }
  net.validate();
  return net;
}

double evaluate_loss(const ReluNetwork& net, const Matrix& X, const Vector& y) {
  if (X.rows() != y.size()) throw ShapeError("trainer", "evaluation size mismatch");
  if (X.rows() == 0) throw DataError("trainer", "evaluation set is empty");
  const Vector eta = predict_eta_batch(net, X);
  double loss = 0.0;
  if (net.link == Link::logit) {
    for (Eigen::Index i = 0; i < y.size(); ++i) loss += bce_logit(eta(i), y(i));
  } else {
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double d = eta(i) - y(i);
      loss += d * d;
    }
  }
  return loss / static_cast<double>(y.size());
}

ReluNetwork train(const Dataset& data, const TrainConfig& config,
                  TrainReport* report) {
  config.validate();
  data.validate();
  if (config.hidden_sizes.empty())
    throw ShapeError("trainer", "hidden_sizes must be set for training");
  const Link link =
      data.task == Task::classification ? Link::logit : Link::identity;
  ReluNetwork net = init_network(data.dim(), config.hidden_sizes, link, config.seed);
  return fit_loop(std::move(net), data, config, report);
}

ReluNetwork finetune(const ReluNetwork& net, const Dataset& data,
                     const TrainConfig& config, TrainReport* report) {
  config.validate();
  net.validate();
  data.validate();
  if (net.input_dim != data.dim())
    throw ShapeError("trainer", "network input_dim does not match dataset");
  const Link expected =
      data.task == Task::classification ? Link::logit : Link::identity;
  if (net.link != expected)
    throw DataError("trainer", "network link does not match dataset task");
  if (config.max_epochs == 0) {
    if (report) *report = TrainReport{};
    return net;
  }
  return fit_loop(net, data, config, report);
}

}  // namespace relux
