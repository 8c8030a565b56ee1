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

#ifndef TAGPROBE_NN_GRAPH_H_
#define TAGPROBE_NN_GRAPH_H_

#include <functional>
#include <random>
#include <span>
#include <vector>

#include "tagprobe/nn/parameters.h"

namespace tagprobe::nn {

// Handle to a node of a Graph.
struct Var {
  int id = -1;
};

// A reverse-mode differentiation tape over dense row-major matrices. Build
// one graph per example, call Backward on a scalar, and parameter gradients
// are added to the sinks passed to Param/Lookup. Nodes that do not depend on
// an updated parameter are never differentiated.
class Graph {
 public:
  // Dropout is active only when `training` is true; it then draws from `rng`.
  explicit Graph(bool training = false, std::mt19937_64* rng = nullptr);
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  Var Input(Matrix value);
  // References `p.value` without copying; `grad_sink` may be nullptr.
  Var Param(const Parameter& p, Matrix* grad_sink);
  // Rows `ids` of an embedding table.
  Var Lookup(const Parameter& table, std::vector<int> ids, Matrix* grad_sink);

  Var MatMul(Var a, Var b);
  Var MatMulTransposed(Var a, Var b);  // a * b^T
  Var Add(Var a, Var b);
  Var AddRow(Var a, Var row);  // adds a 1 x m row to every row of a
  Var Affine(Var x, Var weight, Var bias) { return AddRow(MatMul(x, weight), bias); }
  Var Tanh(Var x);
  Var Relu(Var x);
  Var Dropout(Var x, double rate);
  Var ConcatCols(std::span<const Var> parts);
  Var ConcatRows(std::span<const Var> parts);
  Var GatherRows(Var x, std::vector<int> rows);
  Var AppendOnesColumn(Var x);

  // Single-direction LSTM over the rows of x (T x in). Gate weights are laid
  // out as [input, forget, cell, output]: wx is in x 4H, wh is H x 4H and
  // bias is 1 x 4H. Returns T x H, row t holding the state after reading row
  // t. With `reverse` the rows are read from last to first.
  Var Lstm(Var x, Var wx, Var wh, Var bias, bool reverse);

  // out(i, l) = left.row(i) * W_l * right.row(i)^T where W_l is the l-th
  // block of d_right columns of `weights` (d_left x outputs * d_right).
  Var PairBilinear(Var left, Var right, Var weights, int outputs);

  // Sum over rows of -log softmax(logits.row(i))[targets[i]]; rows with a
  // negative target are skipped. Returns a 1 x 1 node.
  Var SoftmaxCrossEntropy(Var logits, std::vector<int> targets);
  Var Sum(std::span<const Var> scalars);
  Var Scale(Var x, double factor);

  const Matrix& value(Var v) const;
  bool training() const { return training_; }
  int size() const { return static_cast<int>(nodes_.size()); }

  // Seeds d(root)/d(root) = 1 and propagates to every node that needs it.
  void Backward(Var root);

 private:
  struct Node {
    Matrix own;
    const Matrix* external = nullptr;
    Matrix grad;
    bool needs_grad = false;
    std::function<void()> backward;
  };

  Var Push(Matrix value, bool needs_grad);
  bool NeedsGrad(Var v) const { return nodes_[v.id].needs_grad; }
  const Matrix& grad(Var v) const { return nodes_[v.id].grad; }
  void Accumulate(Var v, const Matrix& delta);

  bool training_;
  std::mt19937_64* rng_;
  std::vector<Node> nodes_;
};

}  // namespace tagprobe::nn

#endif  // TAGPROBE_NN_GRAPH_H_
