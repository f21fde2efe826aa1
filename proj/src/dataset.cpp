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

#include "relux/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "relux/io.hpp"
#include "relux/rng.hpp"

namespace relux {

using nlohmann::json;

std::string task_name(Task task) {
  return task == Task::regression ? "regression" : "classification";
}

Task task_from_name(const std::string& name) {
  if (name == "regression") return Task::regression;
  if (name == "classification") return Task::classification;
  throw UsageError("data", "unknown task: " + name);
}

void Dataset::validate() const {
  if (features.rows() == 0) throw DataError("data", "dataset has no rows");
  if (features.cols() == 0) throw DataError("data", "dataset has no feature columns");
  if (response.size() != features.rows())
    throw ShapeError("data", "response length does not match feature rows");
  if (feature_names.size() != static_cast<std::size_t>(features.cols()))
    throw ShapeError("data", "feature name count does not match columns");
  if (!features.allFinite() || !response.allFinite())
    throw NonFiniteError("data", "dataset contains non-finite values");
  if (task == Task::classification) {
    for (int i = 0; i < n(); ++i) {
      if (response(i) != 0.0 && response(i) != 1.0)
        throw DataError("data", "classification labels must be 0 or 1 (row " +
                                    std::to_string(i) + ")");
    }
  }
}

double chirpwave_signal(double x) {
  return std::sin(2.0 * std::numbers::pi / (x + 0.2));
}

Dataset make_chirpwave(int n, double noise_sd, std::uint64_t seed) {
  if (n < 1) throw DataError("data", "sample count must be >= 1");
  Dataset data;
  data.task = Task::regression;
  data.feature_names = {"x"};
  data.features.resize(n, 1);
  data.response.resize(n);
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    const double x = rng.uniform();
    data.features(i, 0) = x;
    data.response(i) = chirpwave_signal(x) + rng.normal(0.0, noise_sd);
  }
  return data;
}

Dataset make_cocircles(int n, double noise_sd, std::uint64_t seed,
                       double inner_factor) {
  if (n < 2) throw DataError("data", "need at least one point per circle");
  if (!(inner_factor > 0.0 && inner_factor < 1.0))
    throw DataError("data", "inner_factor must be in (0, 1)");
  Dataset data;
  data.task = Task::classification;
  data.feature_names = {"x1", "x2"};
  data.features.resize(n, 2);
  data.response.resize(n);

  const int n_outer = n / 2;
  const int n_inner = n - n_outer;
  const double two_pi = 2.0 * std::numbers::pi;
  for (int i = 0; i < n_outer; ++i) {
    const double t = two_pi * static_cast<double>(i) / static_cast<double>(n_outer);
    data.features(i, 0) = std::cos(t);
    data.features(i, 1) = std::sin(t);
    data.response(i) = 0.0;
  }
  for (int i = 0; i < n_inner; ++i) {
    const double t = two_pi * static_cast<double>(i) / static_cast<double>(n_inner);
    data.features(n_outer + i, 0) = inner_factor * std::cos(t);
    data.features(n_outer + i, 1) = inner_factor * std::sin(t);
    data.response(n_outer + i) = 1.0;
  }
  if (noise_sd > 0.0) {
    Rng rng(seed);
    for (int i = 0; i < n; ++i) {
      data.features(i, 0) += rng.normal(0.0, noise_sd);
      data.features(i, 1) += rng.normal(0.0, noise_sd);
    }
  }
  return data;
}

namespace {

double parse_cell(const std::string& field, int row, const std::string& column) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  // Allow surrounding spaces, nothing else.
  while (end && *end == ' ') ++end;
  const char* p = begin;
  while (*p == ' ') ++p;
  if (p == end || (end && *end != '\0'))
    throw DataError("data", "row " + std::to_string(row) + ", column " + column +
                              ": cannot parse '" + field + "' as a number");
  if (!std::isfinite(v))
    throw DataError("data", "row " + std::to_string(row) + ", column " + column +
                              ": non-finite value");
  return v;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  std::size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

}  // namespace

Dataset load_csv(const std::string& path, const std::string& response_column,
                 Task task) {
  const std::string text = read_file(path);
  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (!trim(line).empty()) lines.push_back(line);
    }
  }
  if (lines.size() < 2)
    throw DataError("data", path + ": need a header row and at least one data row");

  std::vector<std::string> header = split_csv_line(lines[0]);
  for (auto& h : header) h = trim(h);
  int response_idx = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == response_column) {
      response_idx = static_cast<int>(c);
      break;
    }
  }
  if (response_idx < 0) {
    std::string available;
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c) available += ", ";
      available += header[c];
    }
    throw DataError("data", path + ": response column '" + response_column +
                              "' not found (columns: " + available + ")");
  }
  if (header.size() < 2)
    throw DataError("data", path + ": need at least one feature column");

  Dataset data;
  data.task = task;
  data.response_name = response_column;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (static_cast<int>(c) != response_idx) data.feature_names.push_back(header[c]);
  }
  const int n = static_cast<int>(lines.size()) - 1;
  const int d = static_cast<int>(header.size()) - 1;
  data.features.resize(n, d);
  data.response.resize(n);

  for (int r = 0; r < n; ++r) {
    const std::vector<std::string> fields = split_csv_line(lines[static_cast<std::size_t>(r) + 1]);
    if (fields.size() != header.size())
      throw DataError("data", path + ": row " + std::to_string(r + 1) + " has " +
                                std::to_string(fields.size()) + " fields, expected " +
                                std::to_string(header.size()));
    int fc = 0;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const double v = parse_cell(fields[c], r + 1, header[c]);
      if (static_cast<int>(c) == response_idx) {
        data.response(r) = v;
      } else {
        data.features(r, fc++) = v;
      }
    }
  }
  data.validate();
  return data;
}

std::string dataset_to_csv(const Dataset& data) {
  std::ostringstream out;
  for (std::size_t c = 0; c < data.feature_names.size(); ++c) {
    if (c) out << ',';
    out << data.feature_names[c];
  }
  out << ',' << data.response_name << '\n';
  for (int r = 0; r < data.n(); ++r) {
    for (int c = 0; c < data.dim(); ++c) {
      if (c) out << ',';
      out << format_double(data.features(r, c));
    }
    out << ',' << format_double(data.response(r)) << '\n';
  }
  return out.str();
}

Matrix ScalerRecord::apply_features(const Matrix& X) const {
  if (static_cast<std::size_t>(X.cols()) != features.size())
    throw ShapeError("data", "scaler feature count does not match matrix");
  Matrix out(X.rows(), X.cols());
  for (Eigen::Index c = 0; c < X.cols(); ++c) {
    const FeatureScale& s = features[static_cast<std::size_t>(c)];
    if (s.constant) {
      out.col(c).setZero();
    } else {
      out.col(c) = (X.col(c).array() - s.min) / (s.max - s.min);
    }
  }
  return out;
}

Vector ScalerRecord::apply_response(const Vector& y) const {
  if (!response) return y;
  if (response->constant) return Vector::Zero(y.size());
  return (y.array() - response->min) / (response->max - response->min);
}

double ScalerRecord::invert_response(double y_scaled) const {
  if (!response) return y_scaled;
  if (response->constant) return response->min;
  return y_scaled * (response->max - response->min) + response->min;
}

std::string ScalerRecord::to_json() const {
  json doc;
  json feats = json::array();
  for (std::size_t c = 0; c < features.size(); ++c) {
    json f;
    f["name"] = c < feature_names.size() ? feature_names[c] : ("f" + std::to_string(c));
    f["min"] = features[c].min;
    f["max"] = features[c].max;
    f["constant"] = features[c].constant;
    feats.push_back(std::move(f));
  }
  doc["features"] = std::move(feats);
  if (response) {
    json r;
    r["name"] = response_name;
    r["min"] = response->min;
    r["max"] = response->max;
    r["constant"] = response->constant;
    doc["response"] = std::move(r);
  } else {
    doc["response"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

ScalerRecord ScalerRecord::from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw SchemaError("data", std::string("invalid scaler JSON: ") + e.what());
  }
  ScalerRecord rec;
  if (!doc.is_object() || !doc.contains("features") || !doc["features"].is_array())
    throw SchemaError("data", "scaler record must contain a features array");
  for (const auto& f : doc["features"]) {
    if (!f.is_object() || !f.contains("min") || !f.contains("max"))
      throw SchemaError("data", "scaler feature entry must contain min and max");
    FeatureScale s;
    s.min = f["min"].get<double>();
    s.max = f["max"].get<double>();
    s.constant = f.value("constant", false);
    rec.features.push_back(s);
    rec.feature_names.push_back(f.value("name", ""));
  }
  if (doc.contains("response") && !doc["response"].is_null()) {
    const auto& r = doc["response"];
    FeatureScale s;
    s.min = r["min"].get<double>();
    s.max = r["max"].get<double>();
    s.constant = r.value("constant", false);
    rec.response = s;
    rec.response_name = r.value("name", "y");
  }
  return rec;
}

SplitResult split_and_scale(const Dataset& data, const SplitSpec& spec) {
  data.validate();
  if (!(spec.train_fraction > 0.0 && spec.train_fraction <= 1.0))
    throw DataError("data", "train_fraction must be in (0, 1]");
  const int n = data.n();
  const int n_train = static_cast<int>(std::floor(spec.train_fraction * n));
  if (n_train < 1) throw DataError("data", "training partition is empty");

  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(spec.seed);
  rng.shuffle(perm);

  auto take = [&](int begin, int count) {
    Dataset part;
    part.task = data.task;
    part.feature_names = data.feature_names;
    part.response_name = data.response_name;
    part.features.resize(count, data.dim());
    part.response.resize(count);
    for (int i = 0; i < count; ++i) {
      part.features.row(i) = data.features.row(perm[static_cast<std::size_t>(begin + i)]);
      part.response(i) = data.response(perm[static_cast<std::size_t>(begin + i)]);
    }
    return part;
  };

  SplitResult result;
  result.train = take(0, n_train);
  result.test = take(n_train, n - n_train);

  if (spec.scale) {
    ScalerRecord& scaler = result.scaler;
    scaler.feature_names = data.feature_names;
    scaler.response_name = data.response_name;
    for (int c = 0; c < data.dim(); ++c) {
      FeatureScale s;
      s.min = result.train.features.col(c).minCoeff();
      s.max = result.train.features.col(c).maxCoeff();
      s.constant = (s.max == s.min);
      scaler.features.push_back(s);
    }
    if (data.task == Task::regression) {
      FeatureScale s;
      s.min = result.train.response.minCoeff();
      s.max = result.train.response.maxCoeff();
      s.constant = (s.max == s.min);
      scaler.response = s;
    }
    result.train.features = scaler.apply_features(result.train.features);
    result.train.response = scaler.apply_response(result.train.response);
    if (result.test.n() > 0) {
      result.test.features = scaler.apply_features(result.test.features);
      result.test.response = scaler.apply_response(result.test.response);
    }
  }
  return result;
}

std::uint64_t dataset_fingerprint(const Dataset& data) {
  return fnv1a64(dataset_to_csv(data));
}

}  // namespace relux
