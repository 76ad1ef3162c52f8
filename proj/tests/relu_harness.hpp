// Copyright 2026 The ewnexus Authors.
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

// Helpers shared by the surrogate tests and the acceptance runner.

#ifndef EWNEXUS_TESTS_RELU_HARNESS_HPP_
#define EWNEXUS_TESTS_RELU_HARNESS_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <random>
#include <utility>
#include <vector>

#include "ewnexus/surrogates.hpp"

namespace ewnexus::testing {

// Forward pass with Eigen matrices, written without looking at relu_forward.
inline double eigen_forward(const ReluNetwork& net, const std::vector<double>& input) {
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(input.data(), input.size());
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const DenseLayer& layer = net.layers[l];
    Eigen::MatrixXd w(layer.outputs(), layer.inputs());
    for (int j = 0; j < layer.outputs(); ++j) {
      for (int i = 0; i < layer.inputs(); ++i) w(j, i) = layer.weights[j][i];
    }
    Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(layer.biases.data(), layer.outputs());
    x = w * x + b;
    if (l + 1 < net.layers.size()) x = x.cwiseMax(0.0);
  }
  return x[0];
}

// 1 to `max_hidden_layers` hidden layers of 1 to `max_nodes` nodes, one
// output. Weights and biases uniform in [-1.5, 1.5].
inline ReluNetwork random_network(std::mt19937_64& rng, int inputs, int max_hidden_layers,
                                  int max_nodes) {
  std::uniform_int_distribution<int> layers_d(1, max_hidden_layers);
  std::uniform_int_distribution<int> nodes_d(1, max_nodes);
  std::uniform_real_distribution<double> w(-1.5, 1.5);
  ReluNetwork net;
  int width = inputs;
  int hidden = layers_d(rng);
  for (int l = 0; l <= hidden; ++l) {
    int out = l == hidden ? 1 : nodes_d(rng);
    DenseLayer layer;
    layer.weights.assign(out, std::vector<double>(width));
    layer.biases.resize(out);
    for (int j = 0; j < out; ++j) {
      for (int i = 0; i < width; ++i) layer.weights[j][i] = w(rng);
      layer.biases[j] = w(rng);
    }
    net.layers.push_back(std::move(layer));
    width = out;
  }
  return net;
}

inline std::vector<double> random_point(std::mt19937_64& rng, const std::vector<Interval>& box) {
  std::vector<double> x;
  for (const Interval& b : box) x.push_back(std::uniform_real_distribution<double>(b.lo, b.hi)(rng));
  return x;
}

// Encodes `net` over `box`, pins the inputs to `x` and returns the smallest
// and largest output the fragment allows. Exact encoding means both equal
// the forward pass.
inline std::pair<double, double> encoded_output_range(const ReluNetwork& net,
                                                      const std::vector<Interval>& box,
                                                      const std::vector<double>& x) {
  MilpModel model;
  std::vector<LinearExpr> inputs;
  std::vector<VarId> vars;
  for (std::size_t i = 0; i < box.size(); ++i) {
    VarId v = model.add_continuous("x" + std::to_string(i), box[i].lo, box[i].hi);
    vars.push_back(v);
    inputs.push_back(LinearExpr().add(v));
  }
  ReluEncoding enc = encode_relu_milp(model, net, inputs, box, "nn");
  for (std::size_t i = 0; i < box.size(); ++i) model.set_bounds(vars[i], x[i], x[i]);
  double out[2] = {kInf, -kInf};
  const ObjectiveSense senses[2] = {ObjectiveSense::kMinimize, ObjectiveSense::kMaximize};
  for (int s = 0; s < 2; ++s) {
    model.set_objective(senses[s], LinearExpr().add(enc.outputs[0]));
    MilpResult r = solve_milp(model);
    if (r.status == SolveStatus::kOptimal) out[s] = r.values[enc.outputs[0].index];
  }
  return {out[0], out[1]};
}

}  // namespace ewnexus::testing

#endif  // EWNEXUS_TESTS_RELU_HARNESS_HPP_
