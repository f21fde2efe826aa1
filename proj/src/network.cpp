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

#include "relux/network.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "relux/io.hpp"

namespace relux {

using nlohmann::json;

std::string link_name(Link link) {
  return link == Link::identity ? "identity" : "logit";
}

Link link_from_name(const std::string& name) {
  if (name == "identity") return Link::identity;
  if (name == "logit") return Link::logit;
  throw SchemaError("network", "unknown link: " + name);
}

int ReluNetwork::total_hidden() const {
  int total = 0;
  for (int h : hidden_sizes) total += h;
  return total;
}

void ReluNetwork::validate() const {
  const auto layers = hidden_sizes.size() + 1;
  if (input_dim < 1) throw ShapeError("network", "input_dim must be >= 1");
  if (hidden_sizes.empty())
    throw ShapeError("network", "at least one hidden layer required");
  for (int h : hidden_sizes) {
    if (h < 1) throw ShapeError("network", "hidden layer width must be >= 1");
  }
  if (weights.size() != layers || biases.size() != layers)
    throw ShapeError("network", "layer count does not match hidden_sizes");

  int fan_in = input_dim;
  for (std::size_t l = 0; l < layers; ++l) {
    const int fan_out =
        l < hidden_sizes.size() ? hidden_sizes[l] : 1;  // output unit
    if (weights[l].rows() != fan_out || weights[l].cols() != fan_in) {
      std::ostringstream msg;
      msg << "layer " << l << " weight shape " << weights[l].rows() << "x"
          << weights[l].cols() << ", expected " << fan_out << "x" << fan_in;
      throw ShapeError("network", msg.str());
    }
    if (biases[l].size() != fan_out) {
      std::ostringstream msg;
      msg << "layer " << l << " bias length " << biases[l].size()
          << ", expected " << fan_out;
      throw ShapeError("network", msg.str());
    }
    if (!weights[l].allFinite() || !biases[l].allFinite())
      throw NonFiniteError("network", "non-finite parameter in layer " + std::to_string(l));
    fan_in = fan_out;
  }
}

ForwardTrace forward(const ReluNetwork& net, const Eigen::Ref<const Vector>& x) {
  if (x.size() != net.input_dim)
    throw ShapeError("network", "input length does not match input_dim");
  ForwardTrace trace;
  trace.preactivations.reserve(net.hidden_sizes.size());
  Vector a = x;
  for (std::size_t l = 0; l < net.hidden_sizes.size(); ++l) {
    Vector z = net.weights[l] * a + net.biases[l];
    trace.preactivations.push_back(z);
    a = z.cwiseMax(0.0);
  }
  trace.eta = (net.weights.back() * a)(0) + net.biases.back()(0);
  return trace;
}

double predict_eta(const ReluNetwork& net, const Eigen::Ref<const Vector>& x) {
  return forward(net, x).eta;
}

Vector predict_eta_batch(const ReluNetwork& net, const Matrix& X) {
  if (X.cols() != net.input_dim)
    throw ShapeError("network", "input width does not match input_dim");
  Matrix a = X;
  for (std::size_t l = 0; l < net.hidden_sizes.size(); ++l) {
    Matrix z = (a * net.weights[l].transpose()).rowwise() + net.biases[l].transpose();
    a = z.cwiseMax(0.0);
  }
  return (a * net.weights.back().transpose()).col(0).array() + net.biases.back()(0);
}

BatchTrace forward_batch(const ReluNetwork& net, const Matrix& X) {
  if (X.cols() != net.input_dim)
    throw ShapeError("network", "input width does not match input_dim");
  BatchTrace trace;
  trace.preactivations.reserve(net.hidden_sizes.size());
  Matrix a = X;
  for (std::size_t l = 0; l < net.hidden_sizes.size(); ++l) {
    Matrix z = (a * net.weights[l].transpose()).rowwise() + net.biases[l].transpose();
    trace.preactivations.push_back(z);
    a = z.cwiseMax(0.0);
  }
  trace.eta = (a * net.weights.back().transpose()).col(0).array() + net.biases.back()(0);
  return trace;
}

double apply_link(Link link, double eta) {
  if (link == Link::identity) return eta;
  return 1.0 / (1.0 + std::exp(-eta));
}

namespace {

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

const json& require_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw SchemaError("network", std::string("missing field: ") + key);
  return *it;
}

Matrix matrix_from_json(const json& rows, const char* where) {
  if (!rows.is_array() || rows.empty())
    throw SchemaError("network", std::string(where) + ": W must be a non-empty array of rows");
  const std::size_t cols = rows[0].is_array() ? rows[0].size() : 0;
  if (cols == 0)
    throw SchemaError("network", std::string(where) + ": W rows must be non-empty arrays");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (!rows[r].is_array() || rows[r].size() != cols)
      throw SchemaError("network", std::string(where) + ": ragged weight matrix");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!rows[r][c].is_number())
        throw SchemaError("network", std::string(where) + ": non-numeric weight");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c].get<double>();
    }
  }
  return m;
}

Vector vector_from_json(const json& arr, const char* where) {
  if (!arr.is_array() || arr.empty())
    throw SchemaError("network", std::string(where) + ": b must be a non-empty array");
  Vector v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number())
      throw SchemaError("network", std::string(where) + ": non-numeric bias");
    v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
  }
  return v;
}

}  // namespace

std::string network_to_json(const ReluNetwork& net) {
  net.validate();
  json doc;
  doc["input_dim"] = net.input_dim;
  doc["hidden_sizes"] = net.hidden_sizes;
  doc["link"] = link_name(net.link);
  json layers = json::array();
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    json layer;
    layer["W"] = matrix_to_json(net.weights[l]);
    layer["b"] = vector_to_json(net.biases[l]);
    layers.push_back(std::move(layer));
  }
  doc["layers"] = std::move(layers);
  return doc.dump(2) + "\n";
}

ReluNetwork network_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw SchemaError("network", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("network", "top level must be an object");

  ReluNetwork net;
  const json& input_dim = require_field(doc, "input_dim");
  if (!input_dim.is_number_integer())
    throw SchemaError("network", "input_dim must be an integer");
  net.input_dim = input_dim.get<int>();

  const json& hidden = require_field(doc, "hidden_sizes");
  if (!hidden.is_array())
    throw SchemaError("network", "hidden_sizes must be an array");
  for (const auto& h : hidden) {
    if (!h.is_number_integer())
      throw SchemaError("network", "hidden_sizes entries must be integers");
    net.hidden_sizes.push_back(h.get<int>());
  }

  const json& link = require_field(doc, "link");
  if (!link.is_string()) throw SchemaError("network", "link must be a string");
  net.link = link_from_name(link.get<std::string>());

  const json& layers = require_field(doc, "layers");
  if (!layers.is_array())
    throw SchemaError("network", "layers must be an array");
  if (layers.size() != net.hidden_sizes.size() + 1)
    throw SchemaError("network", "layers count must be hidden layer count + 1");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const std::string where = "layer " + std::to_string(l);
    if (!layers[l].is_object())
      throw SchemaError("network", where + ": must be an object");
    net.weights.push_back(matrix_from_json(require_field(layers[l], "W"), where.c_str()));
    net.biases.push_back(vector_from_json(require_field(layers[l], "b"), where.c_str()));
  }
  net.validate();
  return net;
}

ReluNetwork load_network(const std::string& path) {
  return network_from_json(read_file(path));
}

void save_network(const ReluNetwork& net, const std::string& path) {
  write_file_atomic(path, network_to_json(net));
}

std::uint64_t network_fingerprint(const ReluNetwork& net) {
  return fnv1a64(network_to_json(net));
}

}  // namespace relux
