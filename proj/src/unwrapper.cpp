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

#include "relux/unwrapper.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "relux/io.hpp"
#include "relux/parallel.hpp"
#include "relux/stats.hpp"

namespace relux {

namespace {

ActivationPattern pattern_from_batch_row(const BatchTrace& trace, int row,
                                         std::size_t total_bits) {
  ActivationPattern p(total_bits);
  std::size_t bit = 0;
  for (const Matrix& z : trace.preactivations) {
    for (Eigen::Index j = 0; j < z.cols(); ++j, ++bit) {
      if (z(row, j) > 0.0) p.set(bit, true);
    }
  }
  return p;
}

std::vector<double> to_std(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

ActivationPattern pattern_from_preacts(const std::vector<Vector>& preacts) {
  std::size_t bits = 0;
  for (const Vector& z : preacts) bits += static_cast<std::size_t>(z.size());
  ActivationPattern p(bits);
  std::size_t bit = 0;
  for (const Vector& z : preacts) {
    for (Eigen::Index j = 0; j < z.size(); ++j, ++bit) {
      if (z(j) > 0.0) p.set(bit, true);
    }
  }
  return p;
}

ActivationPattern activation_pattern(const ReluNetwork& net,
                                     const Eigen::Ref<const Vector>& x) {
  return pattern_from_preacts(forward(net, x).preactivations);
}

LocalLinearModel llm_coefficients(const ReluNetwork& net,
                                  const ActivationPattern& pattern) {
  if (pattern.size() != static_cast<std::size_t>(net.total_hidden()))
    throw ShapeError("unwrapper", "pattern length does not match hidden unit count");

  // Collapse the network from the output layer downwards. A holds the
  // accumulated row vector mapping layer-l activations to the output;
  // masking A's columns by the layer's active bits applies the ReLU gate.
  const int L = net.depth();
  std::vector<std::size_t> offset(static_cast<std::size_t>(L) + 1, 0);
  for (int l = 0; l < L; ++l)
    offset[static_cast<std::size_t>(l) + 1] =
        offset[static_cast<std::size_t>(l)] +
        static_cast<std::size_t>(net.hidden_sizes[static_cast<std::size_t>(l)]);

  Eigen::RowVectorXd a = net.weights.back().row(0);
  double intercept = net.biases.back()(0);
  for (int l = L; l >= 1; --l) {
    const std::size_t begin = offset[static_cast<std::size_t>(l) - 1];
    for (Eigen::Index j = 0; j < a.size(); ++j) {
      if (!pattern.test(begin + static_cast<std::size_t>(j))) a(j) = 0.0;
    }
    intercept += a.dot(net.biases[static_cast<std::size_t>(l) - 1]);
    a = a * net.weights[static_cast<std::size_t>(l) - 1];
  }

  LocalLinearModel llm;
  llm.slope = a.transpose();
  llm.intercept = intercept;
  llm.pattern = pattern;
  return llm;
}

UnwrapResult unwrap(const ReluNetwork& net, const Dataset& data) {
  net.validate();
  data.validate();
  if (data.dim() != net.input_dim)
    throw ShapeError("unwrapper", "dataset width does not match network input_dim");

  const int n = data.n();
  const auto total_bits = static_cast<std::size_t>(net.total_hidden());

  // Patterns first. Chunks only bound the batch matrices; each row's
  // pattern lands in its own slot, so the chunking cannot affect results.
  std::vector<ActivationPattern> patterns(static_cast<std::size_t>(n));
  Vector eta(n);
  constexpr int kChunk = 8192;
  const int n_chunks = (n + kChunk - 1) / kChunk;
  parallel_for(static_cast<std::size_t>(n_chunks), [&](std::size_t ci) {
    const int begin = static_cast<int>(ci) * kChunk;
    const int count = std::min(kChunk, n - begin);
    const BatchTrace trace =
        forward_batch(net, data.features.middleRows(begin, count));
    for (int r = 0; r < count; ++r) {
      patterns[static_cast<std::size_t>(begin + r)] =
          pattern_from_batch_row(trace, r, total_bits);
      eta(begin + r) = trace.eta(r);
    }
  });

  // Group rows by pattern.
  std::unordered_map<ActivationPattern, std::vector<int>, PatternHash> groups;
  for (int i = 0; i < n; ++i) groups[patterns[static_cast<std::size_t>(i)]].push_back(i);

  UnwrapResult result;
  result.link = net.link;
  result.task = data.task;
  result.total_instances = n;
  result.net_fingerprint = network_fingerprint(net);
  result.data_fingerprint = dataset_fingerprint(data);

  result.regions.reserve(groups.size());
  for (auto& [pattern, members] : groups) {
    RegionRecord region;
    region.pattern = pattern;
    region.instances = std::move(members);
    std::sort(region.instances.begin(), region.instances.end());
    region.count = static_cast<int>(region.instances.size());
    result.regions.push_back(std::move(region));
  }
  std::sort(result.regions.begin(), result.regions.end(),
            [](const RegionRecord& a, const RegionRecord& b) {
              if (a.count != b.count) return a.count > b.count;
              return a.pattern.lex_less(b.pattern);
            });

  const std::vector<double> y_all = to_std(data.response);

  parallel_for(result.regions.size(), [&](std::size_t ri) {
    RegionRecord& region = result.regions[ri];
    region.llm = llm_coefficients(net, region.pattern);

    const auto m = static_cast<Eigen::Index>(region.instances.size());
    Matrix member_x(m, data.dim());
    std::vector<double> member_y(region.instances.size());
    std::vector<double> member_eta(region.instances.size());
    for (Eigen::Index k = 0; k < m; ++k) {
      const int row = region.instances[static_cast<std::size_t>(k)];
      member_x.row(k) = data.features.row(row);
      member_y[static_cast<std::size_t>(k)] = data.response(row);
      member_eta[static_cast<std::size_t>(k)] = eta(row);
    }
    region.center = member_x.colwise().mean().transpose();
    region.response_mean = stats::mean(member_y);
    region.single_flag = std::all_of(member_y.begin(), member_y.end(),
                                     [&](double y) { return y == member_y[0]; });
    region.response_std = region.single_flag ? 0.0 : stats::pop_std(member_y);

    if (result.task == Task::regression) {
      if (region.count == 1) {
        region.local_perf = 0.0;
        region.local_degenerate = true;
      } else {
        region.local_perf = stats::mse(member_eta, member_y);
      }
    } else {
      region.local_perf = stats::auc(member_eta, member_y);
    }

    const Vector eta_global = region.llm.eval_batch(data.features);
    const std::vector<double> eta_global_v = to_std(eta_global);
    if (result.task == Task::regression) {
      region.global_perf = stats::mse(eta_global_v, y_all);
    } else {
      region.global_perf = stats::auc(eta_global_v, y_all);
    }
  });

  result.region_of.reserve(result.regions.size());
  result.instance_region.assign(static_cast<std::size_t>(n), -1);
  for (std::size_t ri = 0; ri < result.regions.size(); ++ri) {
    result.region_of.emplace(result.regions[ri].pattern, static_cast<int>(ri));
    for (int row : result.regions[ri].instances)
      result.instance_region[static_cast<std::size_t>(row)] = static_cast<int>(ri);
  }

  const std::vector<double> eta_v = to_std(eta);
  if (result.task == Task::regression) {
    result.model_perf = stats::mse(eta_v, y_all);
  } else {
    result.model_perf = stats::auc(eta_v, y_all);
  }
  return result;
}

RegionAssignment assign_region(const UnwrapResult& result,
                               const ReluNetwork& net,
                               const Eigen::Ref<const Vector>& x) {
  RegionAssignment out;
  out.pattern = activation_pattern(net, x);
  const auto it = result.region_of.find(out.pattern);
  if (it != result.region_of.end()) {
    out.member = true;
    out.region_id = it->second;
    out.llm = result.regions[static_cast<std::size_t>(it->second)].llm;
  } else {
    out.llm = llm_coefficients(net, out.pattern);
  }
  return out;
}

GridEnumeration enumerate_regions_grid(const ReluNetwork& net,
                                       const std::array<double, 2>& x_bounds,
                                       const std::array<double, 2>& y_bounds,
                                       int resolution) {
  net.validate();
  if (net.input_dim != 2)
    throw ShapeError("unwrapper", "grid enumeration requires a 2-d input");
  if (resolution < 2)
    throw DataError("unwrapper", "grid resolution must be >= 2");
  if (!(x_bounds[0] < x_bounds[1]) || !(y_bounds[0] < y_bounds[1]))
    throw DataError("unwrapper", "grid bounds must satisfy min < max");

  GridEnumeration grid;
  grid.resolution = resolution;
  grid.x_bounds = x_bounds;
  grid.y_bounds = y_bounds;
  grid.cell_pattern.assign(
      static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution), -1);

  const auto total_bits = static_cast<std::size_t>(net.total_hidden());
  const double dx = (x_bounds[1] - x_bounds[0]) / (resolution - 1);
  const double dy = (y_bounds[1] - y_bounds[0]) / (resolution - 1);

  // One batched forward per grid row; rows are independent slots.
  std::vector<std::vector<ActivationPattern>> row_patterns(
      static_cast<std::size_t>(resolution));
  parallel_for(static_cast<std::size_t>(resolution), [&](std::size_t row) {
    Matrix X(resolution, 2);
    const double y = y_bounds[0] + dy * static_cast<double>(row);
    for (int i = 0; i < resolution; ++i) {
      X(i, 0) = x_bounds[0] + dx * static_cast<double>(i);
      X(i, 1) = y;
    }
    const BatchTrace trace = forward_batch(net, X);
    auto& out = row_patterns[row];
    out.reserve(static_cast<std::size_t>(resolution));
    for (int i = 0; i < resolution; ++i)
      out.push_back(pattern_from_batch_row(trace, i, total_bits));
  });

  // Sequential dedup in row-major scan order keeps pattern ids deterministic.
  std::unordered_map<ActivationPattern, std::int32_t, PatternHash> ids;
  for (int row = 0; row < resolution; ++row) {
    auto& rp = row_patterns[static_cast<std::size_t>(row)];
    for (int col = 0; col < resolution; ++col) {
      ActivationPattern& p = rp[static_cast<std::size_t>(col)];
      auto [it, inserted] = ids.try_emplace(p, static_cast<std::int32_t>(grid.patterns.size()));
      if (inserted) grid.patterns.push_back(p);
      grid.cell_pattern[static_cast<std::size_t>(row) * static_cast<std::size_t>(resolution) +
                        static_cast<std::size_t>(col)] = it->second;
    }
    rp.clear();
    rp.shrink_to_fit();
  }
  return grid;
}

int GridEnumeration::layer_pattern_count(const ReluNetwork& net, int layer) const {
  if (layer < 0 || layer >= net.depth())
    throw ShapeError("unwrapper", "layer index out of range");
  std::size_t begin = 0;
  for (int l = 0; l < layer; ++l)
    begin += static_cast<std::size_t>(net.hidden_sizes[static_cast<std::size_t>(l)]);
  const std::size_t end =
      begin + static_cast<std::size_t>(net.hidden_sizes[static_cast<std::size_t>(layer)]);
  std::unordered_set<ActivationPattern, PatternHash> distinct;
  for (const ActivationPattern& p : patterns) distinct.insert(p.slice(begin, end));
  return static_cast<int>(distinct.size());
}

namespace {

std::string opt_cell(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

}  // namespace

std::string region_table_csv(const UnwrapResult& result) {
  std::ostringstream out;
  const bool auc = result.task == Task::classification;
  out << (auc ? "Count, Response Mean, Response Std, Local AUC, Global AUC"
              : "Count, Response Mean, Response Std, Local MSE, Global MSE")
      << '\n';
  for (std::size_t ri = 0; ri < result.regions.size(); ++ri) {
    const RegionRecord& r = result.regions[ri];
    out << ri << ',' << r.count << ',' << format_double(r.response_mean) << ','
        << format_double(r.response_std) << ',' << opt_cell(r.local_perf) << ','
        << opt_cell(r.global_perf) << '\n';
  }
  return out.str();
}

std::string llm_table_csv(const UnwrapResult& result,
                          const std::vector<std::string>& feature_names) {
  std::ostringstream out;
  out << "region,pattern,count,single,intercept";
  for (const auto& name : feature_names) out << ',' << name;
  out << '\n';
  for (std::size_t ri = 0; ri < result.regions.size(); ++ri) {
    const RegionRecord& r = result.regions[ri];
    out << ri << ',' << hex64(r.pattern.hash()) << ',' << r.count << ','
        << (r.single_flag ? 1 : 0) << ',' << format_double(r.llm.intercept);
    for (Eigen::Index j = 0; j < r.llm.slope.size(); ++j)
      out << ',' << format_double(r.llm.slope(j));
    out << '\n';
  }
  return out.str();
}

}  // namespace relux
