// Copyright 2026 The tagprobe Authors.
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

#ifndef TAGPROBE_NN_PARAMETERS_H_
#define TAGPROBE_NN_PARAMETERS_H_

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace tagprobe::nn {

using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Parameter {
  std::string name;
  Matrix value;
  // Fixed parameters (pre-trained vectors) are never updated, whatever the
  // group's trainable flag says.
  bool fixed = false;
};

// Named tensors that are frozen or trained together.
struct ParameterGroup {
  std::string name;
  bool trainable = true;
  std::vector<Parameter> parameters;

  Parameter& Add(std::string param_name, Matrix value, bool fixed = false);
  bool Has(std::string_view param_name) const;
  int IndexOf(std::string_view param_name) const;  // throws if absent
  const Parameter& Get(std::string_view param_name) const;
  Parameter& Get(std::string_view param_name);

  bool Updates(const Parameter& p) const { return trainable && !p.fixed; }
  std::int64_t ElementCount() const;
};

// Gradient buffers aligned with a list of groups. Only parameters that the
// group updates get a buffer; the others stay empty.
class Gradients {
 public:
  Gradients() = default;
  explicit Gradients(std::span<const ParameterGroup> groups);

  // nullptr when the parameter is not updated.
  Matrix* Sink(int group, int parameter);
  void Zero();
  double SquaredNorm() const;
  void Scale(double factor);

  const Matrix& at(int group, int parameter) const {
    return buffers_[group][parameter];
  }

 private:
  std::vector<std::vector<Matrix>> buffers_;
};

struct AdamConfig {
  double learning_rate = 2e-3;
  double beta1 = 0.9;
  double beta2 = 0.9;
  double epsilon = 1e-8;
};

// Adam with bias correction, no weight decay.
class AdamOptimizer {
 public:
  AdamOptimizer(AdamConfig config, std::span<const ParameterGroup> groups);

  // Applies one update to every parameter that has a gradient buffer.
  void Step(std::span<ParameterGroup> groups, const Gradients& gradients);
  std::int64_t steps() const { return steps_; }

 private:
  AdamConfig config_;
  std::vector<std::vector<Matrix>> first_moment_;
  std::vector<std::vector<Matrix>> second_moment_;
  std::int64_t steps_ = 0;
};

// Glorot-uniform initialisation.
Matrix GlorotUniform(int rows, int cols, std::mt19937_64& rng);
Matrix UniformMatrix(int rows, int cols, double limit, std::mt19937_64& rng);

}  // namespace tagprobe::nn

#endif  // TAGPROBE_NN_PARAMETERS_H_
