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

#include "relux/simplify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "relux/io.hpp"
#include "relux/parallel.hpp"
#include "relux/rng.hpp"
#include "relux/stats.hpp"

namespace relux {

using nlohmann::json;

namespace {

constexpr double kRefitFallbackRidge = 1e-6;

std::vector<double> to_std(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

// Symmetrized T-nearest-neighbor graph over region centers; ties in
// distance break by smaller region index.
std::vector<std::set<int>> knn_graph(const std::vector<Vector>& centers, int t) {
  const int r = static_cast<int>(centers.size());
  std::vector<std::set<int>> adj(static_cast<std::size_t>(r));
  std::vector<std::pair<double, int>> dist;
  for (int i = 0; i < r; ++i) {
    dist.clear();
    dist.reserve(static_cast<std::size_t>(r) - 1);
    for (int j = 0; j < r; ++j) {
      if (j == i) continue;
      dist.emplace_back((centers[static_cast<std::size_t>(i)] -
                         centers[static_cast<std::size_t>(j)])
                            .squaredNorm(),
                        j);
    }
    const int take = std::min(t, static_cast<int>(dist.size()));
    std::partial_sort(dist.begin(), dist.begin() + take, dist.end());
    for (int k = 0; k < take; ++k) {
      adj[static_cast<std::size_t>(i)].insert(dist[static_cast<std::size_t>(k)].second);
      adj[static_cast<std::size_t>(dist[static_cast<std::size_t>(k)].second)].insert(i);
    }
  }
  return adj;
}

bool graph_connected(const std::vector<std::set<int>>& adj) {
  const int r = static_cast<int>(adj.size());
  if (r == 0) return true;
  std::vector<bool> seen(static_cast<std::size_t>(r), false);
  std::vector<int> stack{0};
  seen[0] = true;
  int visited = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : adj[static_cast<std::size_t>(u)]) {
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = true;
        ++visited;
        stack.push_back(v);
      }
    }
  }
  return visited == r;
}

// Full agglomerative merge sequence under the connectivity constraint.
// Step s merges two active clusters into a new cluster with id R + s.
// Ward cost: merging A and B raises the within-cluster sum of squares by
// |A||B|/(|A|+|B|) * ||c_A - c_B||^2.
std::vector<std::pair<int, int>> ward_merge_sequence(
    const Matrix& coef, const std::vector<std::set<int>>& region_adj) {
  const int r = static_cast<int>(coef.rows());
  const int total = 2 * r - 1;
  std::vector<Vector> centroid(static_cast<std::size_t>(total));
  std::vector<double> size(static_cast<std::size_t>(total), 0.0);
  std::vector<std::set<int>> adj(static_cast<std::size_t>(total));
  std::vector<bool> active(static_cast<std::size_t>(total), false);
  for (int i = 0; i < r; ++i) {
    centroid[static_cast<std::size_t>(i)] = coef.row(i).transpose();
    size[static_cast<std::size_t>(i)] = 1.0;
    adj[static_cast<std::size_t>(i)] = region_adj[static_cast<std::size_t>(i)];
    active[static_cast<std::size_t>(i)] = true;
  }

  std::vector<std::pair<int, int>> steps;
  steps.reserve(static_cast<std::size_t>(r) - 1);
  for (int s = 0; s < r - 1; ++s) {
    double best = std::numeric_limits<double>::infinity();
    int best_i = -1, best_j = -1;
    for (int i = 0; i < r + s; ++i) {
      if (!active[static_cast<std::size_t>(i)]) continue;
      for (int j : adj[static_cast<std::size_t>(i)]) {
        if (j <= i || !active[static_cast<std::size_t>(j)]) continue;
        const double si = size[static_cast<std::size_t>(i)];
        const double sj = size[static_cast<std::size_t>(j)];
        const double delta =
            si * sj / (si + sj) *
            (centroid[static_cast<std::size_t>(i)] - centroid[static_cast<std::size_t>(j)])
                .squaredNorm();
        if (delta < best || (delta == best && (i < best_i || (i == best_i && j < best_j)))) {
          best = delta;
          best_i = i;
          best_j = j;
        }
      }
    }
    if (best_i < 0)
      throw Error("simplify", "connectivity graph lost connectedness during merge");

    const int m = r + s;
    const double si = size[static_cast<std::size_t>(best_i)];
    const double sj = size[static_cast<std::size_t>(best_j)];
    centroid[static_cast<std::size_t>(m)] =
        (si * centroid[static_cast<std::size_t>(best_i)] +
         sj * centroid[static_cast<std::size_t>(best_j)]) /
        (si + sj);
    size[static_cast<std::size_t>(m)] = si + sj;
    std::set<int>& merged = adj[static_cast<std::size_t>(m)];
    for (int v : adj[static_cast<std::size_t>(best_i)]) merged.insert(v);
    for (int v : adj[static_cast<std::size_t>(best_j)]) merged.insert(v);
    merged.erase(best_i);
    merged.erase(best_j);
    for (int v : merged) {
      adj[static_cast<std::size_t>(v)].erase(best_i);
      adj[static_cast<std::size_t>(v)].erase(best_j);
      adj[static_cast<std::size_t>(v)].insert(m);
    }
    active[static_cast<std::size_t>(best_i)] = false;
    active[static_cast<std::size_t>(best_j)] = false;
    active[static_cast<std::size_t>(m)] = true;
    steps.emplace_back(best_i, best_j);
  }
  return steps;
}

// Region labels after stopping the merge sequence at k clusters, labeled
// 0..k-1 in order of first appearance by region index.
std::vector<int> labels_at_k(const std::vector<std::pair<int, int>>& steps,
                             int r, int k) {
  const int replay = std::max(0, r - k);
  std::vector<int> parent(static_cast<std::size_t>(r + replay));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (int s = 0; s < replay; ++s) {
    parent[static_cast<std::size_t>(find(steps[static_cast<std::size_t>(s)].first))] = r + s;
    parent[static_cast<std::size_t>(find(steps[static_cast<std::size_t>(s)].second))] = r + s;
  }
  std::vector<int> labels(static_cast<std::size_t>(r), -1);
  std::vector<int> root_label(static_cast<std::size_t>(r + replay), -1);
  int next = 0;
  for (int i = 0; i < r; ++i) {
    const int root = find(i);
    if (root_label[static_cast<std::size_t>(root)] < 0)
      root_label[static_cast<std::size_t>(root)] = next++;
    labels[static_cast<std::size_t>(i)] = root_label[static_cast<std::size_t>(root)];
  }
  return labels;
}

struct ClusterView {
  std::vector<int> region_ids;
  long instance_count = 0;
  Vector center;  // instance-weighted mean of member region centers
};

std::vector<ClusterView> build_views(const std::vector<int>& labels,
                                     const UnwrapResult& result) {
  const int k = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<ClusterView> views(static_cast<std::size_t>(k));
  for (std::size_t ri = 0; ri < labels.size(); ++ri) {
    const RegionRecord& region = result.regions[ri];
    ClusterView& view = views[static_cast<std::size_t>(labels[ri])];
    view.region_ids.push_back(static_cast<int>(ri));
    view.instance_count += region.count;
  }
  for (ClusterView& view : views) {
    Vector acc = Vector::Zero(result.regions.front().center.size());
    for (int ri : view.region_ids) {
      const RegionRecord& region = result.regions[static_cast<std::size_t>(ri)];
      acc += static_cast<double>(region.count) * region.center;
    }
    view.center = acc / static_cast<double>(view.instance_count);
  }
  return views;
}

bool clusters_adjacent(const ClusterView& a, const ClusterView& b,
                       const std::vector<std::set<int>>& region_adj) {
  for (int ra : a.region_ids) {
    for (int rb : b.region_ids) {
      if (region_adj[static_cast<std::size_t>(ra)].count(rb)) return true;
    }
  }
  return false;
}

// Iteratively folds clusters below tau instances into a neighbor,
// preferring the nearest adjacent large cluster, then any adjacent
// cluster; adjacency-first keeps every cluster connected in the region
// graph. Smallest cluster first; ties by label.
void absorb_small(std::vector<int>& labels, const UnwrapResult& result,
                  const std::vector<std::set<int>>& region_adj, int tau) {
  for (;;) {
    std::vector<ClusterView> views = build_views(labels, result);
    if (views.size() <= 1) return;

    int small = -1;
    for (std::size_t c = 0; c < views.size(); ++c) {
      if (views[c].instance_count >= tau) continue;
      if (small < 0 ||
          views[c].instance_count < views[static_cast<std::size_t>(small)].instance_count)
        small = static_cast<int>(c);
    }
    if (small < 0) return;

    const ClusterView& src = views[static_cast<std::size_t>(small)];
    auto pick_nearest = [&](bool require_large, bool require_adjacent) {
      int best = -1;
      double best_dist = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < views.size(); ++c) {
        if (static_cast<int>(c) == small) continue;
        if (require_large && views[c].instance_count < tau) continue;
        if (require_adjacent && !clusters_adjacent(src, views[c], region_adj)) continue;
        const double dist = (src.center - views[c].center).squaredNorm();
        if (dist < best_dist) {
          best_dist = dist;
          best = static_cast<int>(c);
        }
      }
      return best;
    };
    int target = pick_nearest(true, true);
    if (target < 0) target = pick_nearest(false, true);
    if (target < 0) target = pick_nearest(true, false);
    if (target < 0) target = pick_nearest(false, false);
    if (target < 0) throw Error("simplify", "no absorption target found");

    for (int& label : labels) {
      if (label == small) label = target;
    }
    // Compact labels.
    std::vector<int> remap(views.size(), -1);
    int next = 0;
    for (int& label : labels) {
      if (remap[static_cast<std::size_t>(label)] < 0)
        remap[static_cast<std::size_t>(label)] = next++;
      label = remap[static_cast<std::size_t>(label)];
    }
  }
}

glm::Family family_for(Task task) {
  return task == Task::classification ? glm::Family::binomial : glm::Family::gaussian;
}

// Refit one cluster on the given rows; rank-deficient designs fall back to
// a lightly ridged fit.
glm::GlmFit refit_rows(const Dataset& data, const std::vector<int>& rows,
                       const MergeConfig& cfg, Task task, bool* fallback) {
  Matrix X(static_cast<Eigen::Index>(rows.size()), data.dim());
  Vector y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    X.row(static_cast<Eigen::Index>(i)) = data.features.row(rows[i]);
    y(static_cast<Eigen::Index>(i)) = data.response(rows[i]);
  }
  try {
    return glm::fit(family_for(task), X, y, cfg.refit_penalty, cfg.refit_strength);
  } catch (const Error&) {
    if (fallback) *fallback = true;
    return glm::fit(family_for(task), X, y, glm::Penalty::l2,
                    task == Task::classification ? 1e6 : kRefitFallbackRidge);
  }
}

double piecewise_validation_score(const std::vector<int>& labels,
                                  const UnwrapResult& result,
                                  const Dataset& data,
                                  const std::vector<int>& val_rows,
                                  const std::vector<bool>& is_val,
                                  const MergeConfig& cfg) {
  const int k = *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::vector<int>> fit_rows(static_cast<std::size_t>(k));
  std::vector<std::vector<int>> all_rows(static_cast<std::size_t>(k));
  for (std::size_t ri = 0; ri < labels.size(); ++ri) {
    const int cluster = labels[ri];
    for (int row : result.regions[ri].instances) {
      all_rows[static_cast<std::size_t>(cluster)].push_back(row);
      if (!is_val[static_cast<std::size_t>(row)])
        fit_rows[static_cast<std::size_t>(cluster)].push_back(row);
    }
  }
  std::vector<glm::GlmFit> fits(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) {
    const auto& rows = fit_rows[static_cast<std::size_t>(c)].empty()
                           ? all_rows[static_cast<std::size_t>(c)]
                           : fit_rows[static_cast<std::size_t>(c)];
    fits[static_cast<std::size_t>(c)] = refit_rows(data, rows, cfg, result.task, nullptr);
  }

  std::vector<double> pred, truth;
  pred.reserve(val_rows.size());
  truth.reserve(val_rows.size());
  for (int row : val_rows) {
    const int region = result.instance_region[static_cast<std::size_t>(row)];
    const int cluster = labels[static_cast<std::size_t>(region)];
    pred.push_back(fits[static_cast<std::size_t>(cluster)].predict_eta(
        data.features.row(row).transpose()));
    truth.push_back(data.response(row));
  }
  if (result.task == Task::regression) return stats::mse(pred, truth);
  // Higher is better; undefined AUC ranks below everything.
  return stats::auc(pred, truth).value_or(-1.0);
}

}  // namespace

void MergeConfig::validate() const {
  if (k_grid.empty()) throw DataError("simplify", "k_grid must be non-empty");
  for (int k : k_grid) {
    if (k < 1) throw DataError("simplify", "k_grid values must be >= 1");
  }
  if (neighbors < 0) throw DataError("simplify", "neighbors must be >= 0");
  if (tau < 1) throw DataError("simplify", "tau must be >= 1");
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0))
    throw DataError("simplify", "validation_fraction must be in (0, 1)");
  if (refit_penalty != glm::Penalty::none && !(refit_strength > 0.0))
    throw DataError("simplify", "refit strength must be > 0 for penalized refits");
}

MergedModel merge(const UnwrapResult& result, const Dataset& data,
                  const MergeConfig& config) {
  config.validate();
  if (result.regions.empty()) throw DataError("simplify", "empty unwrap result");
  if (result.total_instances != data.n() ||
      result.data_fingerprint != dataset_fingerprint(data))
    throw DataError("simplify", "dataset does not match the unwrap result");

  const int r = static_cast<int>(result.regions.size());
  const auto d = result.regions.front().llm.slope.size();

  // Coefficient rows (w, b), optionally column-standardized.
  Matrix coef(r, d + 1);
  for (int i = 0; i < r; ++i) {
    coef.row(i).head(d) = result.regions[static_cast<std::size_t>(i)].llm.slope.transpose();
    coef(i, d) = result.regions[static_cast<std::size_t>(i)].llm.intercept;
  }
  if (config.standardize) {
    for (Eigen::Index c = 0; c < coef.cols(); ++c) {
      const double mean = coef.col(c).mean();
      const double sd = std::sqrt((coef.col(c).array() - mean).square().sum() /
                                  static_cast<double>(r));
      if (sd > 0.0) coef.col(c) = (coef.col(c).array() - mean) / sd;
    }
  }

  std::vector<Vector> centers;
  centers.reserve(static_cast<std::size_t>(r));
  for (const RegionRecord& region : result.regions) centers.push_back(region.center);

  int t = config.neighbors > 0
              ? config.neighbors
              : static_cast<int>(std::ceil(0.01 * static_cast<double>(r)));
  t = std::min(std::max(t, 1), std::max(r - 1, 1));
  std::vector<std::set<int>> adj = knn_graph(centers, t);
  while (r > 1 && !graph_connected(adj)) {
    ++t;
    adj = knn_graph(centers, t);
  }

  const std::vector<std::pair<int, int>> steps =
      r > 1 ? ward_merge_sequence(coef, adj) : std::vector<std::pair<int, int>>{};

  // Validation rows for the K search: the tail of a seeded shuffle.
  const int n = data.n();
  const int n_val = std::max(1, static_cast<int>(std::floor(config.validation_fraction * n)));
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  {
    Rng rng(derive_seed(config.seed, 21));
    rng.shuffle(perm);
  }
  std::vector<int> val_rows(perm.end() - n_val, perm.end());
  std::sort(val_rows.begin(), val_rows.end());
  std::vector<bool> is_val(static_cast<std::size_t>(n), false);
  for (int row : val_rows) is_val[static_cast<std::size_t>(row)] = true;

  // Deduplicate grid values after capping at the region count.
  std::vector<int> grid = config.k_grid;
  for (int& k : grid) k = std::min(k, r);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<std::vector<int>> grid_labels(grid.size());
  std::vector<double> grid_scores(grid.size());
  parallel_for(grid.size(), [&](std::size_t gi) {
    std::vector<int> labels = labels_at_k(steps, r, grid[gi]);
    absorb_small(labels, result, adj, config.tau);
    grid_scores[gi] =
        piecewise_validation_score(labels, result, data, val_rows, is_val, config);
    grid_labels[gi] = std::move(labels);
  });

  const bool lower_better = result.task == Task::regression;
  std::size_t best_gi = 0;
  for (std::size_t gi = 1; gi < grid.size(); ++gi) {
    if (lower_better ? grid_scores[gi] < grid_scores[best_gi]
                     : grid_scores[gi] > grid_scores[best_gi])
      best_gi = gi;
  }

  const std::vector<int>& labels = grid_labels[best_gi];
  std::vector<ClusterView> views = build_views(labels, result);

  // Final cluster order: instance count descending, ties by first region.
  std::vector<int> order(views.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (views[static_cast<std::size_t>(a)].instance_count !=
        views[static_cast<std::size_t>(b)].instance_count)
      return views[static_cast<std::size_t>(a)].instance_count >
             views[static_cast<std::size_t>(b)].instance_count;
    return views[static_cast<std::size_t>(a)].region_ids.front() <
           views[static_cast<std::size_t>(b)].region_ids.front();
  });

  MergedModel model;
  model.chosen_k = grid[best_gi];
  model.effective_neighbors = t;
  model.link = result.link;
  model.task = result.task;
  model.net_fingerprint = result.net_fingerprint;
  model.data_fingerprint = result.data_fingerprint;
  model.config = config;
  model.region_to_cluster.assign(static_cast<std::size_t>(r), -1);

  const std::vector<double> y_all = to_std(data.response);
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    const ClusterView& view = views[static_cast<std::size_t>(order[rank])];
    MergedCluster cluster;
    cluster.region_ids = view.region_ids;
    cluster.count = static_cast<int>(view.instance_count);
    for (int ri : view.region_ids)
      model.region_to_cluster[static_cast<std::size_t>(ri)] = static_cast<int>(rank);

    std::vector<int> rows;
    rows.reserve(static_cast<std::size_t>(view.instance_count));
    for (int ri : view.region_ids) {
      const auto& inst = result.regions[static_cast<std::size_t>(ri)].instances;
      rows.insert(rows.end(), inst.begin(), inst.end());
    }
    std::sort(rows.begin(), rows.end());

    cluster.refit = refit_rows(data, rows, config, result.task, &cluster.refit_fallback);

    std::vector<double> member_y, member_eta;
    member_y.reserve(rows.size());
    member_eta.reserve(rows.size());
    for (int row : rows) {
      member_y.push_back(data.response(row));
      member_eta.push_back(
          cluster.refit.predict_eta(data.features.row(row).transpose()));
    }
    cluster.response_mean = stats::mean(member_y);
    const bool single = std::all_of(member_y.begin(), member_y.end(),
                                    [&](double y) { return y == member_y[0]; });
    cluster.response_std = single ? 0.0 : stats::pop_std(member_y);
    if (result.task == Task::regression) {
      cluster.local_perf = stats::mse(member_eta, member_y);
    } else {
      cluster.local_perf = stats::auc(member_eta, member_y);
    }
    const std::vector<double> eta_all =
        to_std(cluster.refit.predict_eta_batch(data.features));
    if (result.task == Task::regression) {
      cluster.global_perf = stats::mse(eta_all, y_all);
    } else {
      cluster.global_perf = stats::auc(eta_all, y_all);
    }
    model.clusters.push_back(std::move(cluster));
  }
  return model;
}

double predict_merged(const MergedModel& model, const UnwrapResult& result,
                      const ReluNetwork& net, const Eigen::Ref<const Vector>& x) {
  const ActivationPattern pattern = activation_pattern(net, x);
  const auto it = result.region_of.find(pattern);
  int cluster;
  if (it != result.region_of.end()) {
    cluster = model.region_to_cluster[static_cast<std::size_t>(it->second)];
  } else {
    // Unseen pattern: vote among the clusters of the T nearest region
    // centers, measured from the query point.
    const int t = std::max(1, model.effective_neighbors);
    std::vector<std::pair<double, int>> dist;
    dist.reserve(result.regions.size());
    for (std::size_t ri = 0; ri < result.regions.size(); ++ri)
      dist.emplace_back((result.regions[ri].center - x).squaredNorm(),
                        static_cast<int>(ri));
    const int take = std::min<int>(t, static_cast<int>(dist.size()));
    std::partial_sort(dist.begin(), dist.begin() + take, dist.end());
    std::vector<int> votes(model.clusters.size(), 0);
    for (int k = 0; k < take; ++k)
      ++votes[static_cast<std::size_t>(
          model.region_to_cluster[static_cast<std::size_t>(dist[static_cast<std::size_t>(k)].second)])];
    const int nearest_cluster =
        model.region_to_cluster[static_cast<std::size_t>(dist[0].second)];
    cluster = nearest_cluster;
    int best_votes = votes[static_cast<std::size_t>(nearest_cluster)];
    for (std::size_t c = 0; c < votes.size(); ++c) {
      if (votes[c] > best_votes) {
        best_votes = votes[c];
        cluster = static_cast<int>(c);
      }
    }
  }
  return model.clusters[static_cast<std::size_t>(cluster)].refit.predict_eta(x);
}

Vector predict_merged_batch(const MergedModel& model, const UnwrapResult& result,
                            const ReluNetwork& net, const Matrix& X) {
  Vector out(X.rows());
  parallel_for(static_cast<std::size_t>(X.rows()), [&](std::size_t i) {
    out(static_cast<Eigen::Index>(i)) = predict_merged(
        model, result, net, X.row(static_cast<Eigen::Index>(i)).transpose());
  });
  return out;
}

FlattenResult flatten(const MergedModel& model, const Dataset& data,
                      const TrainConfig& finetune_config) {
  if (model.clusters.empty()) throw DataError("simplify", "merged model has no clusters");
  const int k = static_cast<int>(model.clusters.size());
  const int d = data.dim();

  ReluNetwork net;
  net.input_dim = d;
  net.hidden_sizes = {k};
  net.link = model.link;
  Matrix w0(k, d);
  Vector b0(k);
  for (int c = 0; c < k; ++c) {
    const Vector& beta = model.clusters[static_cast<std::size_t>(c)].refit.beta;
    if (beta.size() != d + 1)
      throw ShapeError("simplify", "cluster refit width does not match dataset");
    w0.row(c) = beta.tail(d).transpose();
    b0(c) = beta(0);
  }

  // Output layer from a GLM on the propagated hidden activations.
  const Matrix hidden =
      ((data.features * w0.transpose()).rowwise() + b0.transpose()).cwiseMax(0.0);
  FlattenResult flat;
  glm::GlmFit out_fit;
  try {
    out_fit = glm::fit(family_for(model.task), hidden, data.response);
  } catch (const Error&) {
    flat.output_fallback = true;
    out_fit = glm::fit(family_for(model.task), hidden, data.response, glm::Penalty::l2,
                       model.task == Task::classification ? 1e6 : kRefitFallbackRidge);
  }

  net.weights = {std::move(w0), out_fit.beta.tail(k).transpose()};
  net.biases = {std::move(b0), Vector::Constant(1, out_fit.beta(0))};
  net.validate();

  flat.net = finetune(net, data, finetune_config);
  return flat;
}

std::string compare_csv(const ModelComparison& comparison) {
  auto cell = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
  };
  std::ostringstream out;
  out << "ReLU-Net, Merge-Net, FL-Net, SLFN, n_cluster\n";
  out << cell(comparison.relu) << ',' << cell(comparison.merged) << ','
      << cell(comparison.flattened) << ',' << cell(comparison.slfn) << ','
      << comparison.n_cluster << '\n';
  return out.str();
}

std::string merged_to_json(const MergedModel& model) {
  json doc;
  doc["chosen_k"] = model.chosen_k;
  doc["effective_neighbors"] = model.effective_neighbors;
  doc["link"] = link_name(model.link);
  doc["task"] = task_name(model.task);
  doc["net_fingerprint"] = hex64(model.net_fingerprint);
  doc["data_fingerprint"] = hex64(model.data_fingerprint);

  json cfg;
  cfg["k_grid"] = model.config.k_grid;
  cfg["neighbors"] = model.config.neighbors;
  cfg["tau"] = model.config.tau;
  cfg["refit"] = glm::penalty_name(model.config.refit_penalty);
  cfg["strength"] = model.config.refit_strength;
  cfg["validation_fraction"] = model.config.validation_fraction;
  cfg["seed"] = model.config.seed;
  cfg["standardize"] = model.config.standardize;
  doc["config"] = std::move(cfg);

  doc["region_to_cluster"] = model.region_to_cluster;
  json clusters = json::array();
  for (const MergedCluster& cluster : model.clusters) {
    json c;
    c["regions"] = cluster.region_ids;
    c["count"] = cluster.count;
    c["response_mean"] = cluster.response_mean;
    c["response_std"] = cluster.response_std;
    c["local_perf"] = cluster.local_perf ? json(*cluster.local_perf) : json();
    c["global_perf"] = cluster.global_perf ? json(*cluster.global_perf) : json();
    c["refit_fallback"] = cluster.refit_fallback;
    c["separation_warning"] = cluster.refit.separation_warning;
    c["family"] = glm::family_name(cluster.refit.family);
    c["penalty"] = glm::penalty_name(cluster.refit.penalty);
    c["strength"] = cluster.refit.strength;
    json beta = json::array();
    for (Eigen::Index i = 0; i < cluster.refit.beta.size(); ++i)
      beta.push_back(cluster.refit.beta(i));
    c["coefficients"] = std::move(beta);
    clusters.push_back(std::move(c));
  }
  doc["clusters"] = std::move(clusters);
  return doc.dump(2) + "\n";
}

MergedModel merged_from_json(const std::string& text, const UnwrapResult& result) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw SchemaError("simplify", std::string("invalid merged JSON: ") + e.what());
  }
  MergedModel model;
  try {
    model.chosen_k = doc.at("chosen_k").get<int>();
    model.effective_neighbors = doc.at("effective_neighbors").get<int>();
    model.link = link_from_name(doc.at("link").get<std::string>());
    model.task = task_from_name(doc.at("task").get<std::string>());
    model.net_fingerprint = std::stoull(doc.at("net_fingerprint").get<std::string>(), nullptr, 16);
    model.data_fingerprint = std::stoull(doc.at("data_fingerprint").get<std::string>(), nullptr, 16);

    const json& cfg = doc.at("config");
    model.config.k_grid = cfg.at("k_grid").get<std::vector<int>>();
    model.config.neighbors = cfg.at("neighbors").get<int>();
    model.config.tau = cfg.at("tau").get<int>();
    model.config.refit_penalty = glm::penalty_from_name(cfg.at("refit").get<std::string>());
    model.config.refit_strength = cfg.at("strength").get<double>();
    model.config.validation_fraction = cfg.at("validation_fraction").get<double>();
    model.config.seed = cfg.at("seed").get<std::uint64_t>();
    model.config.standardize = cfg.at("standardize").get<bool>();

    model.region_to_cluster = doc.at("region_to_cluster").get<std::vector<int>>();
    for (const json& c : doc.at("clusters")) {
      MergedCluster cluster;
      cluster.region_ids = c.at("regions").get<std::vector<int>>();
      cluster.count = c.at("count").get<int>();
      cluster.response_mean = c.at("response_mean").get<double>();
      cluster.response_std = c.at("response_std").get<double>();
      if (!c.at("local_perf").is_null())
        cluster.local_perf = c.at("local_perf").get<double>();
      if (!c.at("global_perf").is_null())
        cluster.global_perf = c.at("global_perf").get<double>();
      cluster.refit_fallback = c.at("refit_fallback").get<bool>();
      cluster.refit.family = glm::family_from_name(c.at("family").get<std::string>());
      cluster.refit.penalty = glm::penalty_from_name(c.at("penalty").get<std::string>());
      cluster.refit.strength = c.at("strength").get<double>();
      cluster.refit.separation_warning = c.at("separation_warning").get<bool>();
      const auto beta = c.at("coefficients").get<std::vector<double>>();
      cluster.refit.beta = Eigen::Map<const Vector>(beta.data(),
                                                    static_cast<Eigen::Index>(beta.size()));
      cluster.refit.n_obs = cluster.count;
      model.clusters.push_back(std::move(cluster));
    }
  } catch (const json::exception& e) {
    throw SchemaError("simplify", std::string("merged JSON field error: ") + e.what());
  }

  if (model.net_fingerprint != result.net_fingerprint ||
      model.data_fingerprint != result.data_fingerprint)
    throw SchemaError("simplify", "merged model fingerprints do not match the unwrap inputs");
  if (model.region_to_cluster.size() != result.regions.size())
    throw SchemaError("simplify", "region map length does not match the unwrap result");
  return model;
}

}  // namespace relux
