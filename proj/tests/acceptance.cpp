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
//
// End-to-end acceptance gate. Each numbered check prints exactly one
// PASS/FAIL line; the process exits nonzero if any check fails. Checks
// 6, 7, 9 and 10 share a single 20-seed CoCircles study.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "relux/cli.hpp"
#include "relux/dataset.hpp"
#include "relux/diagnose.hpp"
#include "relux/glm.hpp"
#include "relux/interpret.hpp"
#include "relux/io.hpp"
#include "relux/network.hpp"
#include "relux/rng.hpp"
#include "relux/simplify.hpp"
#include "relux/stats.hpp"
#include "relux/trainer.hpp"
#include "relux/unwrapper.hpp"

namespace fs = std::filesystem;
using namespace relux;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Gate {
  int failures = 0;

  void report(int id, const std::string& name, bool ok,
              const std::string& detail) {
    std::printf("[%2d] %s  %s (%s)\n", id, ok ? "PASS" : "FAIL", name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

double auc_of(const Vector& scores, const Vector& labels) {
  std::vector<double> s(scores.data(), scores.data() + scores.size());
  std::vector<double> l(labels.data(), labels.data() + labels.size());
  auto a = stats::auc(s, l);
  return a ? *a : 0.0;
}

double ji_gap(const UnwrapResult& result) {
  const ImportanceTable table = joint_importance(result);
  return std::abs(table.ji_intercept + table.ji_features.sum() - 1.0);
}

oracles::Mat to_mat(const Matrix& X) {
  oracles::Mat out(X.rows(), oracles::Vec(X.cols()));
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < X.cols(); ++j) out[i][j] = X(i, j);
  return out;
}

oracles::Vec to_vec(const Vector& y) {
  return oracles::Vec(y.data(), y.data() + y.size());
}

// ---------------------------------------------------------------------------
// 1. Toy geometry: the hand-built two-layer net splits [-1,1]^2 into 22
//    activation regions, four of them already distinct at layer 1.

void check_toy_geometry(Gate& gate) {
  const auto start = Clock::now();
  const ReluNetwork net = oracles::toy_net();
  const GridEnumeration grid =
      enumerate_regions_grid(net, {-1.0, 1.0}, {-1.0, 1.0}, 2000);
  const int patterns = static_cast<int>(grid.patterns.size());
  const int layer1 = grid.layer_pattern_count(net, 0);
  const double elapsed = seconds_since(start);
  gate.report(1, "toy grid geometry", patterns == 22 && layer1 == 4 && elapsed < 5.0,
              std::to_string(patterns) + " patterns, " + std::to_string(layer1) +
                  " layer-1, " + fmt(elapsed) + "s < 5s");
}

// ---------------------------------------------------------------------------
// 2 & 3. Exactness and partition/convexity over a family of trained nets.

struct TrainedCase {
  ReluNetwork net;
  Dataset data;
  UnwrapResult result;
};

std::vector<TrainedCase> train_family() {
  struct Spec {
    std::vector<int> hidden;
    bool classification;
  };
  const std::vector<Spec> specs = {
      {{4}, false},      {{8}, true},        {{4, 4}, false},
      {{6, 3}, true},    {{8, 8}, false},    {{4, 4, 4}, true},
      {{5}, false},      {{10, 5}, true},    {{3, 3, 3}, false},
      {{12}, true},
  };
  std::vector<TrainedCase> cases;
  cases.reserve(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const std::uint64_t seed = 100 + i;
    Dataset data = specs[i].classification
                       ? make_cocircles(150, 0.1, seed)
                       : make_chirpwave(150, 0.05, seed);
    TrainConfig cfg;
    cfg.hidden_sizes = specs[i].hidden;
    cfg.max_epochs = 60;
    cfg.patience = 60;
    cfg.batch_size = 32;
    cfg.seed = seed;
    ReluNetwork net = train(data, cfg);
    UnwrapResult result = unwrap(net, data);
    cases.push_back({std::move(net), std::move(data), std::move(result)});
  }
  return cases;
}

void check_exactness(Gate& gate, const std::vector<TrainedCase>& cases,
                     double build_seconds) {
  const auto start = Clock::now();
  int checked = 0;
  double worst = 0.0;
  bool ok = true;
  for (const TrainedCase& tc : cases) {
    for (const RegionRecord& region : tc.result.regions) {
      for (int row : region.instances) {
        const Vector x = tc.data.features.row(row).transpose();
        const double lin = region.llm.eval(x);
        const double eta = predict_eta(tc.net, x);
        const double gap = std::abs(lin - eta);
        worst = std::max(worst, gap);
        if (gap > 1e-9 + 1e-9 * std::abs(eta)) ok = false;
        ++checked;
      }
    }
  }
  const double elapsed = build_seconds + seconds_since(start);
  gate.report(2, "local model exactness", ok && elapsed < 30.0,
              std::to_string(cases.size()) + " nets, " +
                  std::to_string(checked) + " instances, worst gap " +
                  fmt(worst) + ", " + fmt(elapsed) + "s < 30s");
}

void check_partition(Gate& gate, const std::vector<TrainedCase>& cases) {
  bool ok = true;
  int midpoints = 0;
  for (std::size_t c = 0; c < cases.size(); ++c) {
    const TrainedCase& tc = cases[c];
    // Disjoint and exhaustive: every row appears in exactly one region.
    std::vector<int> seen(tc.data.n(), 0);
    for (const RegionRecord& region : tc.result.regions)
      for (int row : region.instances) ++seen[row];
    for (int count : seen)
      if (count != 1) ok = false;

    // Offsets of each hidden layer inside the flat pattern bit string.
    std::vector<int> offset(tc.net.hidden_sizes.size() + 1, 0);
    for (std::size_t l = 0; l < tc.net.hidden_sizes.size(); ++l)
      offset[l + 1] = offset[l] + tc.net.hidden_sizes[l];

    // Convexity witness: midpoints of same-region pairs satisfy the
    // region's sign constraints on every preactivation.
    Rng rng(derive_seed(777, c));
    std::vector<int> eligible;
    for (std::size_t r = 0; r < tc.result.regions.size(); ++r)
      if (tc.result.regions[r].count >= 2)
        eligible.push_back(static_cast<int>(r));
    if (eligible.empty()) continue;
    for (int k = 0; k < 100; ++k) {
      const int rid = eligible[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(eligible.size()) - 1))];
      const RegionRecord& region = tc.result.regions[rid];
      const auto pick = [&] {
        return region.instances[static_cast<std::size_t>(rng.uniform_int(
            0, static_cast<std::int64_t>(region.instances.size()) - 1))];
      };
      const int a = pick();
      int b = pick();
      while (b == a) b = pick();
      const Vector mid = 0.5 * (tc.data.features.row(a).transpose() +
                                tc.data.features.row(b).transpose());
      const ForwardTrace trace = forward(tc.net, mid);
      for (std::size_t l = 0; l < trace.preactivations.size(); ++l) {
        for (Eigen::Index j = 0; j < trace.preactivations[l].size(); ++j) {
          const bool active = region.pattern.test(
              static_cast<std::size_t>(offset[l] + j));
          const double z = trace.preactivations[l](j);
          if (active ? z < 0.0 : z > 0.0) ok = false;
        }
      }
      ++midpoints;
    }
  }
  gate.report(3, "partition and convexity", ok,
              std::to_string(midpoints) + " midpoints, exact");
}

// ---------------------------------------------------------------------------
// 4. ChirpWave regression pipeline.

void check_chirpwave(Gate& gate, std::vector<double>& ji_gaps) {
  const auto start = Clock::now();
  const Dataset raw = make_chirpwave(2000, 0.1, derive_seed(42, streams::kData));
  SplitSpec spec;
  spec.train_fraction = 0.8;
  spec.seed = derive_seed(42, streams::kSplit);
  const SplitResult split = split_and_scale(raw, spec);

  TrainConfig cfg;
  cfg.hidden_sizes = {40, 40, 40, 40};
  cfg.max_epochs = 400;
  cfg.patience = 60;
  cfg.batch_size = 64;
  cfg.seed = 42;
  const ReluNetwork net = train(split.train, cfg);

  const Vector pred = predict_eta_batch(net, split.test.features);
  const double test_mse =
      (pred - split.test.response).squaredNorm() / split.test.n();
  const UnwrapResult result = unwrap(net, split.train);
  ji_gaps.push_back(ji_gap(result));
  const int llms = static_cast<int>(result.regions.size());
  const double elapsed = seconds_since(start);
  gate.report(4, "chirpwave pipeline",
              test_mse <= 0.05 && llms >= 20 && llms <= 200 && elapsed < 180.0,
              "test mse " + fmt(test_mse) + " <= 0.05, " + std::to_string(llms) +
                  " llms in [20,200], " + fmt(elapsed) + "s < 180s");
}

// ---------------------------------------------------------------------------
// 5. CoCircles classification pipeline.

void check_cocircles(Gate& gate, std::vector<double>& ji_gaps) {
  const auto start = Clock::now();
  const Dataset raw = make_cocircles(2000, 0.1, derive_seed(7, streams::kData));
  SplitSpec spec;
  spec.train_fraction = 0.8;
  spec.seed = derive_seed(7, streams::kSplit);
  const SplitResult split = split_and_scale(raw, spec);

  TrainConfig cfg;
  cfg.hidden_sizes = {40, 40, 40, 40};
  cfg.max_epochs = 300;
  cfg.patience = 40;
  cfg.batch_size = 64;
  cfg.seed = 7;
  const ReluNetwork net = train(split.train, cfg);

  const double test_auc =
      auc_of(predict_eta_batch(net, split.test.features), split.test.response);
  const UnwrapResult result = unwrap(net, split.train);
  ji_gaps.push_back(ji_gap(result));
  const Census census = single_census(result);
  const double elapsed = seconds_since(start);
  gate.report(5, "cocircles pipeline",
              test_auc >= 0.88 && census.fraction_single >= 0.6 &&
                  elapsed < 180.0,
              "test auc " + fmt(test_auc) + " >= 0.88, single fraction " +
                  fmt(census.fraction_single) + " >= 0.6, " + fmt(elapsed) +
                  "s < 180s");
}

// ---------------------------------------------------------------------------
// 6, 7, 10. One 20-seed CoCircles study shared by the merge, flatten and
// local-inference checks; its unwraps also feed the JI check.

struct SeedRun {
  double relu_auc = 0.0;
  double merge_auc = 0.0;
  double flat_auc = 0.0;
  double slfn_auc = 0.0;
  int clusters = 0;
};

struct Study {
  std::vector<SeedRun> runs;
  MergedModel first_merged;
  std::vector<std::string> feature_names;
  double seconds = 0.0;
};

Study run_study(std::vector<double>& ji_gaps) {
  const auto start = Clock::now();
  Study study;
  for (int s = 1; s <= 20; ++s) {
    const std::uint64_t seed = 1000 + s;
    const Dataset raw =
        make_cocircles(2000, 0.1, derive_seed(seed, streams::kData));
    SplitSpec spec;
    spec.train_fraction = 0.8;
    spec.seed = derive_seed(seed, streams::kSplit);
    const SplitResult split = split_and_scale(raw, spec);

    TrainConfig cfg;
    cfg.hidden_sizes = {40, 40, 40, 40};
    cfg.max_epochs = 200;
    cfg.patience = 30;
    cfg.batch_size = 64;
    cfg.seed = seed;
    const ReluNetwork net = train(split.train, cfg);

    SeedRun run;
    run.relu_auc =
        auc_of(predict_eta_batch(net, split.test.features), split.test.response);

    const UnwrapResult result = unwrap(net, split.train);
    ji_gaps.push_back(ji_gap(result));

    MergeConfig mc;
    mc.seed = seed;
    const MergedModel merged = merge(result, split.train, mc);
    run.clusters = static_cast<int>(merged.clusters.size());
    run.merge_auc = auc_of(
        predict_merged_batch(merged, result, net, split.test.features),
        split.test.response);

    TrainConfig ft = cfg;
    ft.seed = seed;
    const FlattenResult flat = flatten(merged, split.train, ft);
    run.flat_auc = auc_of(predict_eta_batch(flat.net, split.test.features),
                          split.test.response);

    TrainConfig sc = cfg;
    sc.hidden_sizes = {static_cast<int>(merged.clusters.size())};
    sc.seed = derive_seed(seed, 7);
    const ReluNetwork slfn = train(split.train, sc);
    run.slfn_auc = auc_of(predict_eta_batch(slfn, split.test.features),
                          split.test.response);

    study.runs.push_back(run);
    if (s == 1) {
      study.first_merged = merged;
      study.feature_names = split.train.feature_names;
    }
  }
  study.seconds = seconds_since(start);
  return study;
}

void check_merge_study(Gate& gate, const Study& study) {
  double relu = 0.0, merged = 0.0, clusters = 0.0;
  for (const SeedRun& run : study.runs) {
    relu += run.relu_auc;
    merged += run.merge_auc;
    clusters += run.clusters;
  }
  const double n = static_cast<double>(study.runs.size());
  relu /= n;
  merged /= n;
  clusters /= n;
  gate.report(6, "merge study (20 seeds)",
              merged >= relu - 0.06 && clusters <= 20.0 &&
                  study.seconds < 1200.0,
              "merge auc " + fmt(merged) + " >= relu " + fmt(relu) +
                  " - 0.06, mean clusters " + fmt(clusters) + " <= 20, " +
                  fmt(study.seconds) + "s < 1200s");
}

void check_flatten_study(Gate& gate, const Study& study) {
  std::vector<double> diffs;
  double flat = 0.0, slfn = 0.0;
  for (const SeedRun& run : study.runs) {
    diffs.push_back(run.flat_auc - run.slfn_auc);
    flat += run.flat_auc;
    slfn += run.slfn_auc;
  }
  const double n = static_cast<double>(diffs.size());
  flat /= n;
  slfn /= n;
  const double mean_diff = stats::mean(diffs);
  const double sd = stats::sample_std(diffs);
  double p = 1.0;
  if (sd == 0.0) {
    p = mean_diff > 0.0 ? 0.0 : 1.0;
  } else {
    const double t = mean_diff / (sd / std::sqrt(n));
    p = 1.0 - oracles::t_cdf_quad(t, n - 1.0);
  }
  gate.report(7, "flatten study (20 seeds)", flat > slfn && p < 0.05,
              "fl auc " + fmt(flat) + " > slfn " + fmt(slfn) +
                  ", one-sided paired p " + fmt(p) + " < 0.05");
}

void check_local_inference(Gate& gate, const Study& study) {
  const MergedModel& merged = study.first_merged;
  bool ok = merged.clusters.size() >= 2;
  std::string detail;
  for (int c = 0; c < 2 && ok; ++c) {
    const glm::InferenceReport report =
        glm::wald_inference(merged.clusters[c].refit, study.feature_names);
    if (report.rows.size() != 3) ok = false;
    for (const glm::InferenceRow& row : report.rows) {
      if (!(row.p_value < 0.05)) ok = false;
      detail += (detail.empty() ? "p=" : ",") + fmt(row.p_value);
    }
    const std::string csv = glm::inference_csv(report);
    const std::string header = csv.substr(0, csv.find('\n'));
    if (header != "coef,std_err,z,p-value,[0.025,0.975]") ok = false;
  }
  gate.report(10, "local inference significance", ok,
              detail.empty() ? "fewer than two clusters" : detail);
}

// ---------------------------------------------------------------------------
// 8. GLM fits and Wald p-values against independent oracles.

void check_glm_oracles(Gate& gate) {
  const auto start = Clock::now();
  bool ok = true;
  double worst_beta = 0.0, worst_p = 0.0;
  for (int i = 0; i < 20; ++i) {
    const bool binomial = (i % 2) == 1;
    const int n = binomial ? 80 + 6 * i : 30 + 4 * i;
    const int d = 2 + i % 3;
    Rng rng(derive_seed(9000, i));
    Matrix X(n, d);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < d; ++c) X(r, c) = rng.uniform(-2.0, 2.0);
    Vector beta_true(d + 1);
    for (Eigen::Index j = 0; j <= d; ++j) beta_true(j) = rng.normal(0.0, 0.7);
    Vector y(n);
    for (Eigen::Index r = 0; r < n; ++r) {
      double eta = beta_true(0) + X.row(r).dot(beta_true.tail(d));
      if (binomial) {
        const double prob = 1.0 / (1.0 + std::exp(-eta));
        y(r) = rng.uniform() < prob ? 1.0 : 0.0;
      } else {
        y(r) = eta + rng.normal(0.0, 0.5);
      }
    }

    const glm::GlmFit fit = glm::fit(
        binomial ? glm::Family::binomial : glm::Family::gaussian, X, y);
    oracles::Vec oracle_beta;
    if (binomial) {
      oracle_beta = oracles::logit_oracle(to_mat(X), to_vec(y)).beta;
    } else {
      oracle_beta = oracles::ols_oracle(to_mat(X), to_vec(y)).beta;
    }
    for (Eigen::Index j = 0; j <= d; ++j) {
      const double gap = std::abs(fit.beta(j) - oracle_beta[j]);
      worst_beta = std::max(worst_beta, gap);
      if (gap > 1e-6) ok = false;
    }

    std::vector<std::string> names;
    for (int j = 0; j < d; ++j) names.push_back("x" + std::to_string(j + 1));
    const glm::InferenceReport report = glm::wald_inference(fit, names);
    for (const glm::InferenceRow& row : report.rows) {
      const double stat = std::abs(row.statistic);
      const double oracle_p =
          binomial ? 2.0 * (1.0 - oracles::normal_cdf_quad(stat))
                   : 2.0 * (1.0 - oracles::t_cdf_quad(stat, report.dof));
      const double gap = std::abs(row.p_value - oracle_p);
      worst_p = std::max(worst_p, gap);
      if (gap > 1e-10) ok = false;
    }
  }
  const double elapsed = seconds_since(start);
  gate.report(8, "glm oracle agreement", ok && elapsed < 5.0,
              "20 designs, worst beta gap " + fmt(worst_beta) +
                  " <= 1e-6, worst p gap " + fmt(worst_p) + " <= 1e-10, " +
                  fmt(elapsed) + "s < 5s");
}

// ---------------------------------------------------------------------------
// 9. JI normalization across every unwrap the pipelines produced.

void check_ji(Gate& gate, const std::vector<double>& ji_gaps) {
  double worst = 0.0;
  for (double gap : ji_gaps) worst = std::max(worst, gap);
  gate.report(9, "ji normalization", !ji_gaps.empty() && worst <= 1e-12,
              std::to_string(ji_gaps.size()) + " unwraps, worst |sum-1| " +
                  fmt(worst) + " <= 1e-12");
}

// ---------------------------------------------------------------------------
// 11. CLI determinism under varied thread caps.

int run_cli_line(std::vector<std::string> args) {
  args.insert(args.begin(), "relu-unwrap");
  std::vector<char*> argv;
  argv.reserve(args.size());
  for (auto& a : args) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

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

bool run_pipeline(const fs::path& dir) {
  const auto at = [&](const char* name) { return (dir / name).string(); };
  const std::vector<std::vector<std::string>> commands = {
      {"train", "--synthetic", "cocircles", "--n", "400", "--hidden", "16,8",
       "--max-epochs", "60", "--patience", "60", "--batch", "32", "--seed",
       "5", "--out-dir", dir.string()},
      {"unwrap", "--model", at("model.json"), "--data", at("train.csv"),
       "--task", "classification", "--out-dir", dir.string()},
      {"interpret", "--model", at("model.json"), "--data", at("train.csv"),
       "--task", "classification", "--feature", "0", "--top-k", "8",
       "--out-dir", dir.string()},
      {"diagnose", "--model", at("model.json"), "--data", at("train.csv"),
       "--task", "classification", "--top-k", "8", "--out-dir", dir.string()},
      {"merge", "--model", at("model.json"), "--data", at("train.csv"),
       "--task", "classification", "--test-data", at("test.csv"), "--k-grid",
       "2,4,6", "--tau", "10", "--seed", "5", "--out-dir", dir.string()},
      {"flatten", "--merged", at("merged.json"), "--model", at("model.json"),
       "--data", at("train.csv"), "--task", "classification", "--test-data",
       at("test.csv"), "--max-epochs", "20", "--patience", "20", "--batch",
       "32", "--seed", "5", "--out-dir", dir.string()},
      {"infer", "--model", at("model.json"), "--data", at("train.csv"),
       "--task", "classification", "--region-id", "0", "--out-dir",
       dir.string()},
      {"regionmap", "--model", at("model.json"), "--bounds", "-1.2,1.2",
       "--resolution", "64", "--out-dir", dir.string()},
  };
  for (const auto& cmd : commands)
    if (run_cli_line(cmd) != 0) return false;
  return true;
}

std::map<std::string, std::string> snapshot_dir(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::string content = read_file(entry.path().string());
    if (entry.path().filename() == "manifest.json")
      content = strip_wall_time(content);
    files[entry.path().filename().string()] = std::move(content);
  }
  return files;
}

void check_cli_determinism(Gate& gate) {
  // Both passes use the same directory so the manifests' argument echoes
  // match; only the wall-time line is exempt from the comparison.
  const fs::path dir = fs::temp_directory_path() / "relux_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  setenv("RELU_UNWRAP_THREADS", "1", 1);
  const bool ok_a = run_pipeline(dir);
  const auto left = ok_a ? snapshot_dir(dir)
                         : std::map<std::string, std::string>{};
  fs::remove_all(dir);
  fs::create_directories(dir);
  setenv("RELU_UNWRAP_THREADS", "3", 1);
  const bool ok_b = run_pipeline(dir);
  unsetenv("RELU_UNWRAP_THREADS");

  bool ok = ok_a && ok_b;
  int files = 0;
  std::string first_diff;
  if (ok) {
    const auto right = snapshot_dir(dir);
    if (left.size() != right.size()) {
      ok = false;
      first_diff = "file sets differ";
    }
    for (const auto& [name, content] : left) {
      auto it = right.find(name);
      if (it == right.end() || it->second != content) {
        ok = false;
        if (first_diff.empty()) first_diff = name + " differs";
      }
      ++files;
    }
  }
  gate.report(11, "cli determinism across thread caps", ok,
              ok ? std::to_string(files) + " files byte-identical"
                 : (first_diff.empty() ? "pipeline failed" : first_diff));
}

}  // namespace

int main() {
  Gate gate;
  std::vector<double> ji_gaps;

  check_toy_geometry(gate);

  const auto family_start = Clock::now();
  const std::vector<TrainedCase> cases = train_family();
  const double family_seconds = seconds_since(family_start);
  check_exactness(gate, cases, family_seconds);
  check_partition(gate, cases);

  check_chirpwave(gate, ji_gaps);
  check_cocircles(gate, ji_gaps);

  const Study study = run_study(ji_gaps);
  check_merge_study(gate, study);
  check_flatten_study(gate, study);
  check_glm_oracles(gate);
  check_ji(gate, ji_gaps);
  check_local_inference(gate, study);
  check_cli_determinism(gate);

  if (gate.failures == 0) {
    std::printf("acceptance: all 11 checks passed\n");
    return 0;
  }
  std::printf("acceptance: %d check(s) failed\n", gate.failures);
  return 1;
}
