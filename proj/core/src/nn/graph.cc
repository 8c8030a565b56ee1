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

#include "tagprobe/nn/graph.h"

#include <cmath>
#include <memory>

#include "tagprobe/errors.h"

namespace tagprobe::nn {
namespace {

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void Require(bool condition, const char* what) {
  if (!condition) throw InvalidArgument(what);
}

}  // namespace

Graph::Graph(bool training, std::mt19937_64* rng)
    : training_(training), rng_(rng) {
  if (training_ && rng_ == nullptr) {
    throw InvalidArgument("a training graph needs a random generator");
  }
  nodes_.reserve(256);
}

Var Graph::Push(Matrix value, bool needs_grad) {
  Node node;
  node.own = std::move(value);
  node.needs_grad = needs_grad;
  nodes_.push_back(std::move(node));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

const Matrix& Graph::value(Var v) const {
  const Node& node = nodes_[v.id];
  return node.external ? *node.external : node.own;
}

void Graph::Accumulate(Var v, const Matrix& delta) {
  Node& node = nodes_[v.id];
  if (!node.needs_grad) return;
  if (node.grad.size() == 0) {
    node.grad = delta;
  } else {
    node.grad += delta;
  }
}

Var Graph::Input(Matrix value) { return Push(std::move(value), false); }

Var Graph::Param(const Parameter& p, Matrix* grad_sink) {
  Var v = Push(Matrix(), grad_sink != nullptr);
  nodes_[v.id].external = &p.value;
  if (grad_sink) {
    nodes_[v.id].backward = [this, v, grad_sink] { *grad_sink += grad(v); };
  }
  return v;
}

Var Graph::Lookup(const Parameter& table, std::vector<int> ids,
                  Matrix* grad_sink) {
  Matrix rows(static_cast<Eigen::Index>(ids.size()), table.value.cols());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    Require(ids[i] >= 0 && ids[i] < table.value.rows(), "lookup id out of range");
    rows.row(static_cast<Eigen::Index>(i)) = table.value.row(ids[i]);
  }
  Var v = Push(std::move(rows), grad_sink != nullptr);
  if (grad_sink) {
    nodes_[v.id].backward = [this, v, grad_sink, ids = std::move(ids)] {
      const Matrix& g = grad(v);
      for (std::size_t i = 0; i < ids.size(); ++i) {
        grad_sink->row(ids[i]) += g.row(static_cast<Eigen::Index>(i));
      }
    };
  }
  return v;
}

Var Graph::MatMul(Var a, Var b) {
  Require(value(a).cols() == value(b).rows(), "MatMul shape mismatch");
  Var v = Push(value(a) * value(b), NeedsGrad(a) || NeedsGrad(b));
  nodes_[v.id].backward = [this, v, a, b] {
    if (NeedsGrad(a)) Accumulate(a, grad(v) * value(b).transpose());
    if (NeedsGrad(b)) Accumulate(b, value(a).transpose() * grad(v));
  };
  return v;
}

Var Graph::MatMulTransposed(Var a, Var b) {
  Require(value(a).cols() == value(b).cols(), "MatMulTransposed shape mismatch");
  Var v = Push(value(a) * value(b).transpose(), NeedsGrad(a) || NeedsGrad(b));
  nodes_[v.id].backward = [this, v, a, b] {
    if (NeedsGrad(a)) Accumulate(a, grad(v) * value(b));
    if (NeedsGrad(b)) Accumulate(b, grad(v).transpose() * value(a));
  };
  return v;
}

Var Graph::Add(Var a, Var b) {
  Require(value(a).rows() == value(b).rows() &&
              value(a).cols() == value(b).cols(),
          "Add shape mismatch");
  Var v = Push(value(a) + value(b), NeedsGrad(a) || NeedsGrad(b));
  nodes_[v.id].backward = [this, v, a, b] {
    Accumulate(a, grad(v));
    Accumulate(b, grad(v));
  };
  return v;
}

Var Graph::AddRow(Var a, Var row) {
  Require(value(row).rows() == 1 && value(row).cols() == value(a).cols(),
          "AddRow shape mismatch");
  Matrix out = value(a);
  out.rowwise() += value(row).row(0);
  Var v = Push(std::move(out), NeedsGrad(a) || NeedsGrad(row));
  nodes_[v.id].backward = [this, v, a, row] {
    Accumulate(a, grad(v));
    if (NeedsGrad(row)) Accumulate(row, grad(v).colwise().sum());
  };
  return v;
}

Var Graph::Tanh(Var x) {
  Var v = Push(value(x).array().tanh().matrix(), NeedsGrad(x));
  nodes_[v.id].backward = [this, v, x] {
    const Matrix& y = value(v);
    Accumulate(x, (grad(v).array() * (1.0 - y.array().square())).matrix());
  };
  return v;
}

Var Graph::Relu(Var x) {
  Var v = Push(value(x).cwiseMax(0.0), NeedsGrad(x));
  nodes_[v.id].backward = [this, v, x] {
    Accumulate(x, (value(x).array() > 0.0)
                      .select(grad(v), Matrix::Zero(grad(v).rows(), grad(v).cols())));
  };
  return v;
}

Var Graph::Dropout(Var x, double rate) {
  if (!training_ || rate <= 0.0) return x;
  const double keep = 1.0 - rate;
  std::bernoulli_distribution draw(keep);
  const Matrix& in = value(x);
  Matrix mask(in.rows(), in.cols());
  for (Eigen::Index i = 0; i < mask.size(); ++i) {
    mask.data()[i] = draw(*rng_) ? 1.0 / keep : 0.0;
  }
  Var v = Push(in.cwiseProduct(mask), NeedsGrad(x));
  nodes_[v.id].backward = [this, v, x, mask = std::move(mask)] {
    Accumulate(x, grad(v).cwiseProduct(mask));
  };
  return v;
}

Var Graph::ConcatCols(std::span<const Var> parts) {
  Require(!parts.empty(), "ConcatCols of nothing");
  const Eigen::Index rows = value(parts[0]).rows();
  Eigen::Index cols = 0;
  bool needs = false;
  for (Var p : parts) {
    Require(value(p).rows() == rows, "ConcatCols row mismatch");
    cols += value(p).cols();
    needs = needs || NeedsGrad(p);
  }
  Matrix out(rows, cols);
  Eigen::Index offset = 0;
  for (Var p : parts) {
    out.middleCols(offset, value(p).cols()) = value(p);
    offset += value(p).cols();
  }
  Var v = Push(std::move(out), needs);
  nodes_[v.id].backward = [this, v, parts = std::vector<Var>(parts.begin(), parts.end())] {
    Eigen::Index offset = 0;
    for (Var p : parts) {
      const Eigen::Index width = value(p).cols();
      if (NeedsGrad(p)) Accumulate(p, grad(v).middleCols(offset, width));
      offset += width;
    }
  };
  return v;
}

Var Graph::ConcatRows(std::span<const Var> parts) {
  Require(!parts.empty(), "ConcatRows of nothing");
  const Eigen::Index cols = value(parts[0]).cols();
  Eigen::Index rows = 0;
  bool needs = false;
  for (Var p : parts) {
    Require(value(p).cols() == cols, "ConcatRows column mismatch");
    rows += value(p).rows();
    needs = needs || NeedsGrad(p);
  }
  Matrix out(rows, cols);
  Eigen::Index offset = 0;
  for (Var p : parts) {
    out.middleRows(offset, value(p).rows()) = value(p);
    offset += value(p).rows();
  }
  Var v = Push(std::move(out), needs);
  nodes_[v.id].backward = [this, v, parts = std::vector<Var>(parts.begin(), parts.end())] {
    Eigen::Index offset = 0;
    for (Var p : parts) {
      const Eigen::Index height = value(p).rows();
      if (NeedsGrad(p)) Accumulate(p, grad(v).middleRows(offset, height));
      offset += height;
    }
  };
  return v;
}

Var Graph::GatherRows(Var x, std::vector<int> rows) {
  const Matrix& in = value(x);
  Matrix out(static_cast<Eigen::Index>(rows.size()), in.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Require(rows[i] >= 0 && rows[i] < in.rows(), "GatherRows index out of range");
    out.row(static_cast<Eigen::Index>(i)) = in.row(rows[i]);
  }
  Var v = Push(std::move(out), NeedsGrad(x));
  nodes_[v.id].backward = [this, v, x, rows = std::move(rows)] {
    Matrix delta = Matrix::Zero(value(x).rows(), value(x).cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      delta.row(rows[i]) += grad(v).row(static_cast<Eigen::Index>(i));
    }
    Accumulate(x, delta);
  };
  return v;
}

Var Graph::AppendOnesColumn(Var x) {
  Var ones = Input(Matrix::Ones(value(x).rows(), 1));
  const Var parts[] = {x, ones};
  return ConcatCols(parts);
}

Var Graph::Lstm(Var x, Var wx, Var wh, Var bias, bool reverse) {
  const Matrix& input = value(x);
  const Matrix& w_in = value(wx);
  const Matrix& w_rec = value(wh);
  const Eigen::Index steps = input.rows();
  const Eigen::Index h = w_rec.rows();
  Require(w_in.rows() == input.cols() && w_in.cols() == 4 * h &&
              w_rec.cols() == 4 * h && value(bias).rows() == 1 &&
              value(bias).cols() == 4 * h,
          "Lstm shape mismatch");

  struct Cache {
    Matrix gates;   // activated i, f, g, o
    Matrix cells;
    Matrix tanh_cells;
    Matrix previous_hidden;  // hidden state fed into each step
    Matrix previous_cells;
  };
  auto cache = std::make_shared<Cache>();
  Matrix pre = input * w_in;
  pre.rowwise() += value(bias).row(0);
  cache->gates.resize(steps, 4 * h);
  cache->cells.resize(steps, h);
  cache->tanh_cells.resize(steps, h);
  cache->previous_hidden.resize(steps, h);
  cache->previous_cells.resize(steps, h);
  Matrix hidden(steps, h);

  Eigen::RowVectorXd h_prev = Eigen::RowVectorXd::Zero(h);
  Eigen::RowVectorXd c_prev = Eigen::RowVectorXd::Zero(h);
  Eigen::RowVectorXd a(4 * h);
  for (Eigen::Index step = 0; step < steps; ++step) {
    const Eigen::Index t = reverse ? steps - 1 - step : step;
    a.noalias() = pre.row(t);
    a.noalias() += h_prev * w_rec;
    auto gates = cache->gates.row(t);
    for (Eigen::Index k = 0; k < h; ++k) {
      gates(k) = Sigmoid(a(k));
      gates(h + k) = Sigmoid(a(h + k));
      gates(2 * h + k) = std::tanh(a(2 * h + k));
      gates(3 * h + k) = Sigmoid(a(3 * h + k));
    }
    cache->previous_hidden.row(t) = h_prev;
    cache->previous_cells.row(t) = c_prev;
    for (Eigen::Index k = 0; k < h; ++k) {
      const double c = gates(h + k) * c_prev(k) + gates(k) * gates(2 * h + k);
      const double tc = std::tanh(c);
      cache->cells(t, k) = c;
      cache->tanh_cells(t, k) = tc;
      hidden(t, k) = gates(3 * h + k) * tc;
    }
    h_prev = hidden.row(t);
    c_prev = cache->cells.row(t);
  }

  const bool needs =
      NeedsGrad(x) || NeedsGrad(wx) || NeedsGrad(wh) || NeedsGrad(bias);
  Var v = Push(std::move(hidden), needs);
  nodes_[v.id].backward = [this, v, x, wx, wh, bias, reverse, cache] {
    const Matrix& d_hidden = grad(v);
    const Matrix& w_rec = value(wh);
    const Eigen::Index steps = d_hidden.rows();
    const Eigen::Index h = w_rec.rows();
    Matrix d_pre(steps, 4 * h);
    Eigen::RowVectorXd dh_next = Eigen::RowVectorXd::Zero(h);
    Eigen::RowVectorXd dc_next = Eigen::RowVectorXd::Zero(h);
    for (Eigen::Index step = steps - 1; step >= 0; --step) {
      const Eigen::Index t = reverse ? steps - 1 - step : step;
      const auto gates = cache->gates.row(t);
      auto da = d_pre.row(t);
      for (Eigen::Index k = 0; k < h; ++k) {
        const double i = gates(k), f = gates(h + k), g = gates(2 * h + k),
                     o = gates(3 * h + k);
        const double tc = cache->tanh_cells(t, k);
        const double dh = d_hidden(t, k) + dh_next(k);
        const double dc = dc_next(k) + dh * o * (1.0 - tc * tc);
        da(k) = dc * g * i * (1.0 - i);
        da(h + k) = dc * cache->previous_cells(t, k) * f * (1.0 - f);
        da(2 * h + k) = dc * i * (1.0 - g * g);
        da(3 * h + k) = dh * tc * o * (1.0 - o);
        dc_next(k) = dc * f;
      }
      dh_next.noalias() = da * w_rec.transpose();
    }
    if (NeedsGrad(wh)) Accumulate(wh, cache->previous_hidden.transpose() * d_pre);
    if (NeedsGrad(wx)) Accumulate(wx, value(x).transpose() * d_pre);
    if (NeedsGrad(bias)) Accumulate(bias, d_pre.colwise().sum());
    if (NeedsGrad(x)) Accumulate(x, d_pre * value(wx).transpose());
  };
  return v;
}

Var Graph::PairBilinear(Var left, Var right, Var weights, int outputs) {
  const Matrix& l = value(left);
  const Matrix& r = value(right);
  const Matrix& w = value(weights);
  const Eigen::Index d_right = r.cols();
  Require(l.rows() == r.rows() && w.rows() == l.cols() &&
              w.cols() == outputs * d_right,
          "PairBilinear shape mismatch");
  auto z = std::make_shared<Matrix>(l * w);
  Matrix out(l.rows(), outputs);
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    for (int o = 0; o < outputs; ++o) {
      out(i, o) = z->row(i).segment(o * d_right, d_right).dot(r.row(i));
    }
  }
  const bool needs = NeedsGrad(left) || NeedsGrad(right) || NeedsGrad(weights);
  Var v = Push(std::move(out), needs);
  nodes_[v.id].backward = [this, v, left, right, weights, outputs, z] {
    const Matrix& g = grad(v);
    const Matrix& r = value(right);
    const Eigen::Index d_right = r.cols();
    Matrix dz(z->rows(), z->cols());
    Matrix dr = Matrix::Zero(r.rows(), d_right);
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      for (int o = 0; o < outputs; ++o) {
        dz.row(i).segment(o * d_right, d_right) = g(i, o) * r.row(i);
        dr.row(i) += g(i, o) * z->row(i).segment(o * d_right, d_right);
      }
    }
    if (NeedsGrad(right)) Accumulate(right, dr);
    if (NeedsGrad(left)) Accumulate(left, dz * value(weights).transpose());
    if (NeedsGrad(weights)) Accumulate(weights, value(left).transpose() * dz);
  };
  return v;
}

Var Graph::SoftmaxCrossEntropy(Var logits, std::vector<int> targets) {
  const Matrix& s = value(logits);
  Require(static_cast<Eigen::Index>(targets.size()) == s.rows(),
          "SoftmaxCrossEntropy target count mismatch");
  auto probabilities = std::make_shared<Matrix>(s.rows(), s.cols());
  double loss = 0.0;
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    const double top = s.row(i).maxCoeff();
    auto p = probabilities->row(i);
    p = (s.row(i).array() - top).exp().matrix();
    const double total = p.sum();
    p /= total;
    const int target = targets[i];
    if (target < 0) continue;
    Require(target < s.cols(), "SoftmaxCrossEntropy target out of range");
    loss += std::log(total) + top - s(i, target);
  }
  Matrix out(1, 1);
  out(0, 0) = loss;
  Var v = Push(std::move(out), NeedsGrad(logits));
  nodes_[v.id].backward = [this, v, logits, probabilities,
                           targets = std::move(targets)] {
    const double g = grad(v)(0, 0);
    Matrix delta = *probabilities;
    for (Eigen::Index i = 0; i < delta.rows(); ++i) {
      if (targets[i] < 0) {
        delta.row(i).setZero();
        continue;
      }
      delta(i, targets[i]) -= 1.0;
    }
    Accumulate(logits, g * delta);
  };
  return v;
}

Var Graph::Sum(std::span<const Var> scalars) {
  Matrix out = Matrix::Zero(1, 1);
  bool needs = false;
  for (Var s : scalars) {
    Require(value(s).size() == 1, "Sum expects scalars");
    out(0, 0) += value(s)(0, 0);
    needs = needs || NeedsGrad(s);
  }
  Var v = Push(std::move(out), needs);
  nodes_[v.id].backward = [this, v, scalars = std::vector<Var>(scalars.begin(), scalars.end())] {
    for (Var s : scalars) Accumulate(s, grad(v));
  };
  return v;
}

Var Graph::Scale(Var x, double factor) {
  Var v = Push(factor * value(x), NeedsGrad(x));
  nodes_[v.id].backward = [this, v, x, factor] { Accumulate(x, factor * grad(v)); };
  return v;
}

void Graph::Backward(Var root) {
  Require(value(root).size() == 1, "Backward expects a scalar root");
  if (!NeedsGrad(root)) return;
  nodes_[root.id].grad = Matrix::Ones(1, 1);
  for (int id = root.id; id >= 0; --id) {
    Node& node = nodes_[id];
    if (!node.needs_grad || node.grad.size() == 0 || !node.backward) continue;
    node.backward();
  }
}

}  // namespace tagprobe::nn
