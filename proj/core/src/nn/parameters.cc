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

#include "tagprobe/nn/parameters.h"

#include <cmath>

#include "tagprobe/errors.h"

namespace tagprobe::nn {

Parameter& ParameterGroup::Add(std::string param_name, Matrix value,
                               bool fixed) {
  if (Has(param_name)) {
    throw InvalidArgument("duplicate parameter " + name + "/" + param_name);
  }
  parameters.push_back(Parameter{std::move(param_name), std::move(value), fixed});
  return parameters.back();
}

bool ParameterGroup::Has(std::string_view param_name) const {
  for (const Parameter& p : parameters) {
    if (p.name == param_name) return true;
  }
  return false;
}

int ParameterGroup::IndexOf(std::string_view param_name) const {
  for (std::size_t i = 0; i < parameters.size(); ++i) {
    if (parameters[i].name == param_name) return static_cast<int>(i);
  }
  throw InvalidArgument("no parameter " + name + "/" + std::string(param_name));
}

const Parameter& ParameterGroup::Get(std::string_view param_name) const {
  return parameters[IndexOf(param_name)];
}

Parameter& ParameterGroup::Get(std::string_view param_name) {
  return parameters[IndexOf(param_name)];
}

std::int64_t ParameterGroup::ElementCount() const {
  std::int64_t count = 0;
  for (const Parameter& p : parameters) count += p.value.size();
  return count;
}

Gradients::Gradients(std::span<const ParameterGroup> groups) {
  buffers_.resize(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (const Parameter& p : groups[g].parameters) {
      buffers_[g].push_back(groups[g].Updates(p)
                                ? Matrix::Zero(p.value.rows(), p.value.cols())
                                : Matrix());
    }
  }
}

Matrix* Gradients::Sink(int group, int parameter) {
  Matrix& buffer = buffers_[group][parameter];
  return buffer.size() == 0 ? nullptr : &buffer;
}

void Gradients::Zero() {
  for (auto& group : buffers_) {
    for (Matrix& buffer : group) buffer.setZero();
  }
}

double Gradients::SquaredNorm() const {
  double total = 0.0;
  for (const auto& group : buffers_) {
    for (const Matrix& buffer : group) total += buffer.squaredNorm();
  }
  return total;
}

void Gradients::Scale(double factor) {
  for (auto& group : buffers_) {
    for (Matrix& buffer : group) buffer *= factor;
  }
}

AdamOptimizer::AdamOptimizer(AdamConfig config,
                             std::span<const ParameterGroup> groups)
    : config_(config) {
  first_moment_.resize(groups.size());
  second_moment_.resize(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (const Parameter& p : groups[g].parameters) {
      const bool updated = groups[g].Updates(p);
      first_moment_[g].push_back(
          updated ? Matrix::Zero(p.value.rows(), p.value.cols()) : Matrix());
      second_moment_[g].push_back(
          updated ? Matrix::Zero(p.value.rows(), p.value.cols()) : Matrix());
    }
  }
}

void AdamOptimizer::Step(std::span<ParameterGroup> groups,
                         const Gradients& gradients) {
  ++steps_;
  const double correction1 =
      1.0 - std::pow(config_.beta1, static_cast<double>(steps_));
  const double correction2 =
      1.0 - std::pow(config_.beta2, static_cast<double>(steps_));
  const double step_size =
      config_.learning_rate * std::sqrt(correction2) / correction1;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (std::size_t i = 0; i < groups[g].parameters.size(); ++i) {
      Matrix& m = first_moment_[g][i];
      if (m.size() == 0) continue;
      Matrix& v = second_moment_[g][i];
      const Matrix& grad = gradients.at(static_cast<int>(g), static_cast<int>(i));
      m = config_.beta1 * m + (1.0 - config_.beta1) * grad;
      v = config_.beta2 * v + (1.0 - config_.beta2) * grad.cwiseProduct(grad);
      groups[g].parameters[i].value.array() -=
          step_size * m.array() /
          (v.array().sqrt() + config_.epsilon * std::sqrt(correction2));
    }
  }
}

Matrix UniformMatrix(int rows, int cols, double limit, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uniform(-limit, limit);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = uniform(rng);
  return m;
}

Matrix GlorotUniform(int rows, int cols, std::mt19937_64& rng) {
  return UniformMatrix(rows, cols, std::sqrt(6.0 / (rows + cols)), rng);
}

}  // namespace tagprobe::nn
