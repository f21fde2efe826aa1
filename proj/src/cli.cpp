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

#include "relux/cli.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "relux/charts.hpp"
#include "relux/common.hpp"
#include "relux/dataset.hpp"
#include "relux/diagnose.hpp"
#include "relux/glm.hpp"
#include "relux/interpret.hpp"
#include "relux/io.hpp"
#include "relux/manifest.hpp"
#include "relux/network.hpp"
#include "relux/rng.hpp"
#include "relux/simplify.hpp"
#include "relux/stats.hpp"
#include "relux/trainer.hpp"
#include "relux/unwrapper.hpp"

namespace relux {
namespace {

// Distinct seed stream for the SLFN baseline trained next to a flattened
// model; keeps it independent of the finetune stream.
constexpr std::uint64_t kSlfnStream = 7;

// Collects emitted files under --out-dir and writes the manifest last, so
// the manifest's output list covers everything including itself.
class Emitter {
 public:
  Emitter(std::string out_dir, std::string command, std::uint64_t seed)
      : dir_(std::move(out_dir)) {
    manifest_.command = std::move(command);
    manifest_.seed = seed;
    manifest_.tool_version = kToolVersion;
  }

  void config(const std::string& key, const std::string& value) {
    manifest_.config.emplace_back(key, value);
  }
  void input(const std::string& path, std::uint64_t fingerprint) {
    manifest_.inputs.emplace_back(path, hex64(fingerprint));
  }
  void emit(const std::string& name, const std::string& content) {
    write_file_atomic(dir_ + "/" + name, content);
    manifest_.outputs.push_back(name);
  }
  void finish(double wall_seconds) {
    manifest_.wall_time_seconds = wall_seconds;
    manifest_.outputs.push_back("manifest.json");
    write_file_atomic(dir_ + "/manifest.json", manifest_to_json(manifest_));
  }

 private:
  std::string dir_;
  RunManifest manifest_;
};

struct Options {
  std::string model_path;
  std::string merged_path;
  std::string data_path;
  std::string test_data_path;
  std::string synthetic;
  std::string response_col = "y";
  std::string task;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  int top_k = 10;
  int feature = 0;
  std::string k_grid;
  int neighbors = 0;
  int tau = 30;
  std::string refit = "glm";
  double strength = 0.0;
  int bootstrap = 0;
  std::string bounds = "-1,1";
  int resolution = 256;
  std::string thresholds;
  int region_id = 0;
  // dataset construction
  int n = 1000;
  double noise_sd = 0.1;
  double train_fraction = 0.8;
  bool no_scale = false;
  // trainer
  std::string hidden;
  int max_epochs = 2000;
  int patience = 100;
  int batch = 0;
  double lr = 1e-3;
  double val_fraction = 0.2;
  std::string optimizer = "adam";
};

std::vector<double> parse_doubles(const std::string& text,
                                  const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("cli", flag + ": '" + item + "' is not a number");
    }
  }
  if (out.empty()) throw UsageError("cli", flag + ": empty list");
  return out;
}

std::vector<int> parse_ints(const std::string& text, const std::string& flag) {
  std::vector<int> out;
  for (double v : parse_doubles(text, flag)) {
    int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
      throw UsageError("cli", flag + ": expected integers");
    out.push_back(i);
  }
  return out;
}

Task parse_task(const std::string& name) {
  if (name == "regression") return Task::regression;
  if (name == "classification") return Task::classification;
  throw UsageError("cli", "--task must be regression or classification");
}

Task task_for_model(const ReluNetwork& net, const std::string& task_flag) {
  if (!task_flag.empty()) return parse_task(task_flag);
  return net.link == Link::logit ? Task::classification : Task::regression;
}

glm::Penalty parse_refit(const std::string& name) {
  if (name == "glm") return glm::Penalty::none;
  if (name == "l1") return glm::Penalty::l1;
  if (name == "l2") return glm::Penalty::l2;
  throw UsageError("cli", "--refit must be glm, l1, or l2");
}

Dataset load_data(const Options& opt, const std::string& path, Task task,
                  Emitter& em) {
  Dataset data = load_csv(path, opt.response_col, task);
  em.input(path, dataset_fingerprint(data));
  return data;
}

ReluNetwork load_model(const Options& opt, Emitter& em) {
  ReluNetwork net = load_network(opt.model_path);
  em.input(opt.model_path, network_fingerprint(net));
  return net;
}

std::vector<double> to_vec(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

// Performance of raw predictions against a dataset: AUC for
// classification (of eta scores), MSE for regression.
std::optional<double> performance(Task task, const Vector& eta,
                                  const Vector& y) {
  if (task == Task::classification) return stats::auc(to_vec(eta), to_vec(y));
  return stats::mse(to_vec(eta), to_vec(y));
}

TrainConfig trainer_config(const Options& opt, std::uint64_t stream_seed,
                           std::vector<int> hidden) {
  TrainConfig cfg;
  cfg.hidden_sizes = std::move(hidden);
  cfg.max_epochs = opt.max_epochs;
  // patience <= max_epochs is a config invariant; clamp so short finetunes
  // do not need a matching --patience.
  cfg.patience = std::min(opt.patience, opt.max_epochs);
  cfg.validation_fraction = opt.val_fraction;
  cfg.batch_size = opt.batch;
  cfg.learning_rate = opt.lr;
  cfg.optimizer = optimizer_from_name(opt.optimizer);
  cfg.seed = stream_seed;
  return cfg;
}

void echo_trainer(const Options& opt, Emitter& em) {
  em.config("max_epochs", std::to_string(opt.max_epochs));
  em.config("patience", std::to_string(std::min(opt.patience, opt.max_epochs)));
  em.config("batch", std::to_string(opt.batch));
  em.config("lr", format_double(opt.lr));
  em.config("val_fraction", format_double(opt.val_fraction));
  em.config("optimizer", opt.optimizer);
}

std::string report_json(const TrainReport& report, double final_train_loss,
                        std::optional<double> test_perf, bool auc_metric) {
  nlohmann::ordered_json doc;
  doc["epochs_run"] = report.epochs_run;
  doc["best_epoch"] = report.best_epoch;
  doc["best_val_loss"] = report.best_val_loss;
  doc["final_train_loss"] = final_train_loss;
  if (test_perf)
    doc[auc_metric ? "test_auc" : "test_mse"] = *test_perf;
  doc["train_history"] = report.train_history;
  doc["val_history"] = report.val_history;
  return doc.dump(2) + "\n";
}

void cmd_train(const Options& opt, Emitter& em) {
  Dataset raw;
  Task task;
  if (!opt.synthetic.empty()) {
    if (!opt.data_path.empty())
      throw UsageError("cli", "--data and --synthetic are exclusive");
    std::uint64_t dseed = derive_seed(opt.seed, streams::kData);
    if (opt.synthetic == "chirpwave") {
      raw = make_chirpwave(opt.n, opt.noise_sd, dseed);
      task = Task::regression;
    } else if (opt.synthetic == "cocircles") {
      raw = make_cocircles(opt.n, opt.noise_sd, dseed);
      task = Task::classification;
    } else {
      throw UsageError("cli", "--synthetic must be chirpwave or cocircles");
    }
    em.config("synthetic", opt.synthetic);
    em.config("n", std::to_string(opt.n));
    em.config("noise_sd", format_double(opt.noise_sd));
  } else {
    if (opt.data_path.empty())
      throw UsageError("cli", "train needs --data or --synthetic");
    if (opt.task.empty())
      throw UsageError("cli", "--task is required with --data");
    task = parse_task(opt.task);
    raw = load_data(opt, opt.data_path, task, em);
  }

  SplitSpec split_spec;
  split_spec.train_fraction = opt.train_fraction;
  split_spec.seed = derive_seed(opt.seed, streams::kSplit);
  split_spec.scale = !opt.no_scale;
  SplitResult split = split_and_scale(raw, split_spec);
  em.config("train_fraction", format_double(opt.train_fraction));
  em.config("scale", opt.no_scale ? "0" : "1");

  if (opt.hidden.empty()) throw UsageError("cli", "--hidden is required");
  std::vector<int> hidden = parse_ints(opt.hidden, "--hidden");
  em.config("hidden", opt.hidden);
  echo_trainer(opt, em);

  TrainConfig cfg =
      trainer_config(opt, derive_seed(opt.seed, streams::kInit), hidden);
  TrainReport report;
  ReluNetwork net = train(split.train, cfg, &report);

  Vector test_eta = predict_eta_batch(net, split.test.features);
  std::optional<double> test_perf =
      performance(task, test_eta, split.test.response);
  double train_loss =
      evaluate_loss(net, split.train.features, split.train.response);

  em.emit("train.csv", dataset_to_csv(split.train));
  em.emit("test.csv", dataset_to_csv(split.test));
  if (split_spec.scale) em.emit("scaler.json", split.scaler.to_json());
  em.emit("model.json", network_to_json(net));
  em.emit("training.json", report_json(report, train_loss, test_perf,
                                       task == Task::classification));
}

void cmd_unwrap(const Options& opt, Emitter& em) {
  ReluNetwork net = load_model(opt, em);
  Task task = task_for_model(net, opt.task);
  Dataset data = load_data(opt, opt.data_path, task, em);
  UnwrapResult result = unwrap(net, data);
  em.emit("regions.csv", region_table_csv(result));
  em.emit("llms.csv", llm_table_csv(result, data.feature_names));
}

void cmd_interpret(const Options& opt, Emitter& em) {
  ReluNetwork net = load_model(opt, em);
  Task task = task_for_model(net, opt.task);
  Dataset data = load_data(opt, opt.data_path, task, em);
  em.config("feature", std::to_string(opt.feature));
  em.config("top_k", std::to_string(opt.top_k));
  UnwrapResult result = unwrap(net, data);

  auto segments = local_profile(result, data, opt.feature, opt.top_k);
  std::string fname = (opt.feature < static_cast<int>(data.feature_names.size()))
                          ? data.feature_names[opt.feature]
                          : ("x" + std::to_string(opt.feature));
  em.emit("profile.csv", profile_csv(segments));
  em.emit("profile.svg", profile_chart(segments, fname));

  ImportanceTable importance = joint_importance(result);
  em.emit("importance.csv", importance_csv(importance, data.feature_names));
  em.emit("importance.svg", importance_chart(importance, data.feature_names));

  ParallelCoordinates pc = parallel_coordinates(result, false, true);
  em.emit("parallel.csv", parallel_csv(pc, data.feature_names));
  em.emit("parallel.svg", parallel_chart(pc, data.feature_names));
}

void cmd_diagnose(const Options& opt, Emitter& em) {
  ReluNetwork net = load_model(opt, em);
  Task task = task_for_model(net, opt.task);
  Dataset data = load_data(opt, opt.data_path, task, em);

  ExtrapolationThresholds th;
  if (!opt.thresholds.empty()) {
    auto vals = parse_doubles(opt.thresholds, "--thresholds");
    if (vals.size() != 2)
      throw UsageError("cli", "--thresholds expects auc_good,mse_factor");
    th.auc_good = vals[0];
    th.mse_factor = vals[1];
  }
  em.config("thresholds",
            format_double(th.auc_good) + "," + format_double(th.mse_factor));
  em.config("top_k", std::to_string(opt.top_k));

  UnwrapResult result = unwrap(net, data);
  PolarProjection polar = polar_projection(result);
  Census census = single_census(result);
  auto all_rows = extrapolation_report(
      result, static_cast<int>(result.regions.size()), th);
  auto top_rows = extrapolation_report(
      result, std::min<int>(opt.top_k, static_cast<int>(result.regions.size())),
      th);

  const bool auc_metric = task == Task::classification;
  const std::string metric = auc_metric ? "auc" : "mse";
  std::ostringstream diag;
  diag << "region_id,count,single_flag,angle,radius,local_" << metric
       << ",global_" << metric << ",verdict\n";
  for (size_t i = 0; i < all_rows.size(); ++i) {
    const auto& r = all_rows[i];
    const auto& p = polar.points[i];
    diag << r.region_id << ',' << r.count << ','
         << (result.regions[r.region_id].single_flag ? 1 : 0) << ','
         << format_double(p.angle) << ',' << format_double(p.radius) << ',';
    if (r.local_perf) diag << format_double(*r.local_perf);
    diag << ',';
    if (r.global_perf) diag << format_double(*r.global_perf);
    diag << ',' << verdict_name(r.verdict) << '\n';
  }
  em.emit("diagnose.csv", diag.str());
  em.emit("polar.csv", polar_csv(polar));
  em.emit("polar.svg", polar_chart(polar, true));
  em.emit("extrapolation.csv", extrapolation_csv(top_rows, auc_metric));
  em.emit("extrapolation.svg", extrapolation_chart(top_rows, auc_metric, th));
  em.emit("census.json", census_json(census));
}

MergeConfig merge_config(const Options& opt) {
  MergeConfig mc;
  if (!opt.k_grid.empty()) mc.k_grid = parse_ints(opt.k_grid, "--k-grid");
  mc.neighbors = opt.neighbors;
  mc.tau = opt.tau;
  mc.refit_penalty = parse_refit(opt.refit);
  mc.refit_strength = opt.strength;
  mc.seed = derive_seed(opt.seed, streams::kMerge);
  return mc;
}

void echo_merge(const Options& opt, const MergeConfig& mc, Emitter& em) {
  std::ostringstream grid;
  for (size_t i = 0; i < mc.k_grid.size(); ++i) {
    if (i > 0) grid << ',';
    grid << mc.k_grid[i];
  }
  em.config("k_grid", grid.str());
  em.config("neighbors", std::to_string(opt.neighbors));
  em.config("tau", std::to_string(opt.tau));
  em.config("refit", opt.refit);
  em.config("strength", format_double(opt.strength));
}

ModelComparison compare_on(const Options& opt, Task task,
                           const ReluNetwork& net, const UnwrapResult& result,
                           const MergedModel& merged,
                           const ReluNetwork* flattened,
                           const ReluNetwork* slfn, Emitter& em) {
  ModelComparison cmp;
  cmp.n_cluster = static_cast<int>(merged.clusters.size());
  cmp.auc_metric = task == Task::classification;
  Dataset eval;
  if (!opt.test_data_path.empty()) {
    eval = load_data(opt, opt.test_data_path, task, em);
  } else {
    eval = load_csv(opt.data_path, opt.response_col, task);
  }
  cmp.relu = performance(task, predict_eta_batch(net, eval.features),
                         eval.response);
  cmp.merged = performance(
      task, predict_merged_batch(merged, result, net, eval.features),
      eval.response);
  if (flattened)
    cmp.flattened = performance(
        task, predict_eta_batch(*flattened, eval.features), eval.response);
  if (slfn)
    cmp.slfn = performance(task, predict_eta_batch(*slfn, eval.features),
                           eval.response);
  return cmp;
}

void cmd_merge(const Options& opt, Emitter& em) {
  ReluNetwork net = load_model(opt, em);
  Task task = task_for_model(net, opt.task);
  Dataset data = load_data(opt, opt.data_path, task, em);
  MergeConfig mc = merge_config(opt);
  echo_merge(opt, mc, em);

  UnwrapResult result = unwrap(net, data);
  MergedModel merged = merge(result, data, mc);
  em.emit("merged.json", merged_to_json(merged));

  if (mc.refit_penalty == glm::Penalty::none) {
    std::vector<std::string> names = data.feature_names;
    for (size_t k = 0; k < merged.clusters.size(); ++k) {
      auto report = glm::wald_inference(merged.clusters[k].refit, names);
      em.emit("inference_cluster_" + std::to_string(k) + ".csv",
              glm::inference_csv(report));
    }
  }

  ModelComparison cmp =
      compare_on(opt, task, net, result, merged, nullptr, nullptr, em);
  em.emit("compare.csv", compare_csv(cmp));
}

void cmd_flatten(const Options& opt, Emitter& em) {
  if (opt.merged_path.empty())
    throw UsageError("cli", "flatten needs --merged");
  ReluNetwork net = load_model(opt, em);
  Task task = task_for_model(net, opt.task);
  Dataset data = load_data(opt, opt.data_path, task, em);
  UnwrapResult result = unwrap(net, data);

  std::string merged_text = read_file(opt.merged_path);
  em.input(opt.merged_path, fnv1a64(merged_text));
  MergedModel merged = merged_from_json(merged_text, result);
  echo_trainer(opt, em);

  TrainConfig ft = trainer_config(opt, derive_seed(opt.seed, streams::kInit),
                                  {});
  FlattenResult flat = flatten(merged, data, ft);
  em.emit("flat_model.json", network_to_json(flat.net));

  // Same-width single-hidden-layer baseline trained from scratch.
  int k = static_cast<int>(merged.clusters.size());
  TrainConfig slfn_cfg =
      trainer_config(opt, derive_seed(opt.seed, kSlfnStream), {k});
  ReluNetwork slfn = train(data, slfn_cfg);

  ModelComparison cmp =
      compare_on(opt, task, net, result, merged, &flat.net, &slfn, em);
  em.emit("compare.csv", compare_csv(cmp));
}

void cmd_infer(const Options& opt, Emitter& em) {
  ReluNetwork net = load_model(opt, em);
  Task task = task_for_model(net, opt.task);
  Dataset data = load_data(opt, opt.data_path, task, em);
  UnwrapResult result = unwrap(net, data);
  em.config("region_id", std::to_string(opt.region_id));
  em.config("refit", opt.refit);
  em.config("strength", format_double(opt.strength));
  em.config("bootstrap", std::to_string(opt.bootstrap));

  std::vector<int> members;
  if (!opt.merged_path.empty()) {
    std::string merged_text = read_file(opt.merged_path);
    em.input(opt.merged_path, fnv1a64(merged_text));
    MergedModel merged = merged_from_json(merged_text, result);
    if (opt.region_id < 0 ||
        opt.region_id >= static_cast<int>(merged.clusters.size()))
      throw UsageError("cli", "--region-id out of range for merged model");
    for (int rid : merged.clusters[opt.region_id].region_ids)
      for (int row : result.regions[rid].instances) members.push_back(row);
  } else {
    if (opt.region_id < 0 ||
        opt.region_id >= static_cast<int>(result.regions.size()))
      throw UsageError("cli", "--region-id out of range");
    members = result.regions[opt.region_id].instances;
  }
  std::sort(members.begin(), members.end());

  Matrix X(members.size(), data.dim());
  Vector y(members.size());
  for (size_t i = 0; i < members.size(); ++i) {
    X.row(static_cast<Eigen::Index>(i)) = data.features.row(members[i]);
    y(static_cast<Eigen::Index>(i)) = data.response(members[i]);
  }

  glm::Family family = task == Task::classification ? glm::Family::binomial
                                                    : glm::Family::gaussian;
  glm::Penalty penalty = parse_refit(opt.refit);
  if (penalty == glm::Penalty::none) {
    glm::GlmFit fit = glm::fit(family, X, y);
    auto report = glm::wald_inference(fit, data.feature_names);
    em.emit("inference.csv", glm::inference_csv(report));
  } else if (opt.bootstrap <= 0) {
    throw UsageError("cli",
                     "penalized refits need --bootstrap for inference");
  }
  if (opt.bootstrap > 0) {
    auto boot = glm::bootstrap_inference(
        family, X, y, penalty, opt.strength, opt.bootstrap,
        derive_seed(opt.seed, streams::kBootstrap), data.feature_names);
    em.emit("bootstrap.csv", glm::bootstrap_csv(boot));
  }
}

void cmd_regionmap(const Options& opt, Emitter& em) {
  ReluNetwork net = load_model(opt, em);
  auto vals = parse_doubles(opt.bounds, "--bounds");
  std::array<double, 2> xb{}, yb{};
  if (vals.size() == 2) {
    xb = {vals[0], vals[1]};
    yb = {vals[0], vals[1]};
  } else if (vals.size() == 4) {
    xb = {vals[0], vals[1]};
    yb = {vals[2], vals[3]};
  } else {
    throw UsageError("cli", "--bounds expects lo,hi or x_lo,x_hi,y_lo,y_hi");
  }
  em.config("bounds", opt.bounds);
  em.config("resolution", std::to_string(opt.resolution));
  GridEnumeration grid = enumerate_regions_grid(net, xb, yb, opt.resolution);
  em.emit("regionmap.svg", regionmap_chart(grid));
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  Options opt;
  CLI::App app{"unwraps feed-forward ReLU networks into local linear models"};
  app.set_help_all_flag("--help-all");
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub, bool needs_data) {
    sub->add_option("--seed", opt.seed, "root RNG seed");
    sub->add_option("--out-dir", opt.out_dir, "output directory");
    if (needs_data) {
      sub->add_option("--data", opt.data_path, "input CSV");
      sub->add_option("--response-col", opt.response_col,
                      "response column name");
      sub->add_option("--task", opt.task,
                      "regression or classification (default: model link)");
    }
  };
  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--model", opt.model_path, "model JSON")->required();
  };
  auto add_trainer = [&](CLI::App* sub) {
    sub->add_option("--max-epochs", opt.max_epochs, "epoch cap");
    sub->add_option("--patience", opt.patience, "early-stop patience");
    sub->add_option("--batch", opt.batch, "mini-batch size (0 = auto)");
    sub->add_option("--lr", opt.lr, "learning rate");
    sub->add_option("--val-fraction", opt.val_fraction,
                    "validation slice for early stopping");
    sub->add_option("--optimizer", opt.optimizer, "adam or sgd");
  };

  CLI::App* train = app.add_subcommand("train", "fit a ReLU network");
  add_common(train, true);
  add_trainer(train);
  train->add_option("--hidden", opt.hidden, "hidden sizes, e.g. 40,40,40,40");
  train->add_option("--synthetic", opt.synthetic,
                    "built-in dataset: chirpwave or cocircles");
  train->add_option("--n", opt.n, "synthetic sample count");
  train->add_option("--noise-sd", opt.noise_sd, "synthetic noise level");
  train->add_option("--train-fraction", opt.train_fraction, "split fraction");
  train->add_flag("--no-scale", opt.no_scale, "skip min-max scaling");

  CLI::App* unwrap_cmd = app.add_subcommand("unwrap", "extract the LLM set");
  add_common(unwrap_cmd, true);
  add_model(unwrap_cmd);

  CLI::App* interpret = app.add_subcommand("interpret",
                                           "profiles, importance, parallels");
  add_common(interpret, true);
  add_model(interpret);
  interpret->add_option("--feature", opt.feature, "feature index to profile");
  interpret->add_option("--top-k", opt.top_k, "regions to draw");

  CLI::App* diagnose = app.add_subcommand("diagnose",
                                          "census, polar, extrapolation");
  add_common(diagnose, true);
  add_model(diagnose);
  diagnose->add_option("--top-k", opt.top_k, "regions in extrapolation view");
  diagnose->add_option("--thresholds", opt.thresholds,
                       "verdict thresholds auc_good,mse_factor");

  CLI::App* merge_cmd = app.add_subcommand("merge", "cluster the LLM set");
  add_common(merge_cmd, true);
  add_model(merge_cmd);
  merge_cmd->add_option("--test-data", opt.test_data_path,
                        "held-out CSV for compare.csv");
  merge_cmd->add_option("--k-grid", opt.k_grid, "candidate cluster counts");
  merge_cmd->add_option("--neighbors", opt.neighbors,
                        "adjacency neighbors (0 = auto)");
  merge_cmd->add_option("--tau", opt.tau, "small-cluster absorption bound");
  merge_cmd->add_option("--refit", opt.refit, "glm, l1, or l2");
  merge_cmd->add_option("--strength", opt.strength, "penalty strength");

  CLI::App* flatten_cmd = app.add_subcommand("flatten",
                                             "build a single-layer net");
  add_common(flatten_cmd, true);
  add_model(flatten_cmd);
  flatten_cmd->add_option("--merged", opt.merged_path, "merged model JSON")
      ->required();
  flatten_cmd->add_option("--test-data", opt.test_data_path,
                          "held-out CSV for compare.csv");
  add_trainer(flatten_cmd);

  CLI::App* infer = app.add_subcommand("infer", "GLM inference on a region");
  add_common(infer, true);
  add_model(infer);
  infer->add_option("--merged", opt.merged_path,
                    "merged model JSON (region ids become cluster ids)");
  infer->add_option("--region-id", opt.region_id, "region or cluster id");
  infer->add_option("--refit", opt.refit, "glm, l1, or l2");
  infer->add_option("--strength", opt.strength, "penalty strength");
  infer->add_option("--bootstrap", opt.bootstrap, "bootstrap replicates");

  CLI::App* regionmap = app.add_subcommand("regionmap", "2-d region map");
  add_common(regionmap, false);
  add_model(regionmap);
  regionmap->add_option("--bounds", opt.bounds,
                        "lo,hi or x_lo,x_hi,y_lo,y_hi");
  regionmap->add_option("--resolution", opt.resolution, "grid resolution");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::fprintf(stderr, "error: cli: %s\n", e.what());
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  auto started = std::chrono::steady_clock::now();
  try {
    Emitter em(opt.out_dir, name, opt.seed);
    if (name == "train") cmd_train(opt, em);
    else if (name == "unwrap") cmd_unwrap(opt, em);
    else if (name == "interpret") cmd_interpret(opt, em);
    else if (name == "diagnose") cmd_diagnose(opt, em);
    else if (name == "merge") cmd_merge(opt, em);
    else if (name == "flatten") cmd_flatten(opt, em);
    else if (name == "infer") cmd_infer(opt, em);
    else cmd_regionmap(opt, em);
    double wall = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - started)
                      .count();
    em.finish(wall);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s: %s\n", e.module().c_str(), e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s: %s\n", e.module().c_str(), e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: cli: %s\n", e.what());
    return 1;
  }
  return 0;
}

}  // namespace relux
