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

#include "tagprobe/network.h"

#include <cmath>

#include "tagprobe/errors.h"
#include "tagprobe/vocabulary.h"

namespace tagprobe {

using nn::Matrix;
using nn::Var;

nn::Matrix* Binder::Sink(GroupId group, int index) const {
  if (!gradients_) return nullptr;
  return gradients_->Sink(group, index);
}

Var Binder::operator()(nn::Graph& g, GroupId group, std::string_view name) const {
  const nn::ParameterGroup& params = state_.group(group);
  const int index = params.IndexOf(name);
  return g.Param(params.parameters[index], Sink(group, index));
}

Var Binder::Lookup(nn::Graph& g, GroupId group, std::string_view name,
                   std::vector<int> ids) const {
  const nn::ParameterGroup& params = state_.group(group);
  const int index = params.IndexOf(name);
  return g.Lookup(params.parameters[index], std::move(ids), Sink(group, index));
}

namespace graph {
namespace {

Var BiLstm(nn::Graph& g, const Binder& bind, GroupId group,
           const std::string& prefix, Var input) {
  Var forward = g.Lstm(input, bind(g, group, prefix + "_fw_wx"),
                       bind(g, group, prefix + "_fw_wh"),
                       bind(g, group, prefix + "_fw_b"), /*reverse=*/false);
  Var backward = g.Lstm(input, bind(g, group, prefix + "_bw_wx"),
                        bind(g, group, prefix + "_bw_wh"),
                        bind(g, group, prefix + "_bw_b"), /*reverse=*/true);
  const Var parts[] = {forward, backward};
  return g.ConcatCols(parts);
}

Var CharSummaries(nn::Graph& g, const Binder& bind, const Sentence& sentence) {
  const ModelState& state = bind.state();
  const Var fw_wx = bind(g, kCharEncoderGroup, "fw_wx");
  const Var fw_wh = bind(g, kCharEncoderGroup, "fw_wh");
  const Var fw_b = bind(g, kCharEncoderGroup, "fw_b");
  const Var bw_wx = bind(g, kCharEncoderGroup, "bw_wx");
  const Var bw_wh = bind(g, kCharEncoderGroup, "bw_wh");
  const Var bw_b = bind(g, kCharEncoderGroup, "bw_b");
  std::vector<Var> words;
  words.reserve(sentence.size());
  for (const Token& token : sentence.tokens) {
    std::vector<int> ids;
    for (char32_t c : DecodeUtf8(token.form)) ids.push_back(state.vocabulary.CharId(c));
    if (ids.empty()) ids.push_back(Vocabulary::kPadId);
    const int last = static_cast<int>(ids.size()) - 1;
    Var chars = bind.Lookup(g, kCharEncoderGroup, "embed", std::move(ids));
    Var forward = g.GatherRows(g.Lstm(chars, fw_wx, fw_wh, fw_b, false), {last});
    Var backward = g.GatherRows(g.Lstm(chars, bw_wx, bw_wh, bw_b, true), {0});
    const Var finals[] = {forward, backward};
    words.push_back(g.ConcatCols(finals));
  }
  return g.Affine(g.ConcatRows(words), bind(g, kCharEncoderGroup, "proj_w"),
                  bind(g, kCharEncoderGroup, "proj_b"));
}

Var Mlp(nn::Graph& g, const Binder& bind, const std::string& prefix, Var input) {
  const double dropout = bind.state().config.dropout;
  return g.Dropout(g.Relu(g.Affine(input, bind(g, kHeadGroup, prefix + "_w"),
                                   bind(g, kHeadGroup, prefix + "_b"))),
                   dropout);
}

}  // namespace

Var Encode(nn::Graph& g, const Binder& bind, const Sentence& sentence,
           const TagSequence* tags) {
  const ModelState& state = bind.state();
  const EncoderConfig& config = state.config;
  if (sentence.size() == 0) throw InvalidArgument("cannot encode an empty sentence");
  if (tags && !config.use_tags) {
    throw InvalidArgument("tag inputs given to an encoder without tag embeddings");
  }
  if (config.use_tags && !tags && !state.withhold_tags) {
    throw InvalidArgument("encoder uses tag embeddings but no tags were given");
  }
  if (tags && tags->size() != sentence.size()) {
    throw InvalidArgument("tag sequence length does not match the sentence");
  }

  std::vector<int> word_rows;
  word_rows.reserve(sentence.size());
  for (const Token& token : sentence.tokens) word_rows.push_back(state.WordRow(token.form));
  const char* word_table = state.has_pretrained() ? "word_pretrained" : "word";

  std::vector<Var> parts;
  parts.push_back(g.Dropout(
      bind.Lookup(g, kEmbeddingGroup, word_table, std::move(word_rows)), config.dropout));
  parts.push_back(g.Dropout(CharSummaries(g, bind, sentence), config.dropout));
  if (config.use_tags) {
    std::vector<int> tag_ids;
    tag_ids.reserve(sentence.size());
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      tag_ids.push_back(tags && !state.withhold_tags ? TagInputId((*tags)[i])
                                                     : kTagMaskId);
    }
    parts.push_back(g.Dropout(bind.Lookup(g, kEmbeddingGroup, "tag", std::move(tag_ids)),
                              config.dropout));
  }
  Var input = g.ConcatCols(parts);
  if (state.root_position) {
    const Var rows[] = {bind(g, kEmbeddingGroup, "root"), input};
    input = g.ConcatRows(rows);
  }
  for (int layer = 0; layer < config.lstm_layers; ++layer) {
    input = g.Dropout(
        BiLstm(g, bind, kBilstmGroup, "layer" + std::to_string(layer), input),
        config.dropout);
  }
  return input;
}

Var TaggerLogits(nn::Graph& g, const Binder& bind, Var vectors) {
  const ModelState& state = bind.state();
  if (state.head != HeadKind::kTagger) throw InvalidArgument("model has no tagger head");
  if (state.root_position) {
    std::vector<int> rows(g.value(vectors).rows() - 1);
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<int>(i) + 1;
    vectors = g.GatherRows(vectors, std::move(rows));
  }
  return g.Affine(Mlp(g, bind, "mlp", vectors), bind(g, kHeadGroup, "out_w"),
                  bind(g, kHeadGroup, "out_b"));
}

ParserHidden ParserScores(nn::Graph& g, const Binder& bind, Var vectors) {
  const ModelState& state = bind.state();
  if (state.head != HeadKind::kParser) throw InvalidArgument("model has no parser head");
  const int n = static_cast<int>(g.value(vectors).rows()) - 1;
  std::vector<int> dependents(n);
  for (int i = 0; i < n; ++i) dependents[i] = i + 1;

  ParserHidden hidden;
  Var arc_dep = g.AppendOnesColumn(Mlp(g, bind, "arc_dep", vectors));
  Var arc_head = g.AppendOnesColumn(Mlp(g, bind, "arc_head", vectors));
  arc_dep = g.GatherRows(arc_dep, dependents);
  hidden.arc_scores =
      g.MatMulTransposed(g.MatMul(arc_dep, bind(g, kHeadGroup, "arc_u")), arc_head);
  hidden.rel_dep = g.AppendOnesColumn(Mlp(g, bind, "rel_dep", vectors));
  hidden.rel_head = g.AppendOnesColumn(Mlp(g, bind, "rel_head", vectors));
  return hidden;
}

Var RelationLogits(nn::Graph& g, const Binder& bind, const ParserHidden& hidden,
                   const std::vector<int>& dependents, const std::vector<int>& heads) {
  const int relations = std::max(bind.state().vocabulary.relation_count(), 1);
  return g.PairBilinear(g.GatherRows(hidden.rel_dep, dependents),
                        g.GatherRows(hidden.rel_head, heads),
                        bind(g, kHeadGroup, "rel_u"), relations);
}

}  // namespace graph

namespace {

void SoftmaxRows(Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    auto row = m.row(i);
    row = (row.array() - row.maxCoeff()).exp().matrix();
    row /= row.sum();
  }
}

}  // namespace

Matrix Encode(const ModelState& state, const Sentence& sentence,
              const TagSequence* tags) {
  nn::Graph g;
  Binder bind(state, nullptr);
  return g.value(graph::Encode(g, bind, sentence, tags));
}

Matrix TaggerForward(const ModelState& state, const Matrix& vectors) {
  nn::Graph g;
  Binder bind(state, nullptr);
  Matrix probabilities = g.value(graph::TaggerLogits(g, bind, g.Input(vectors)));
  SoftmaxRows(probabilities);
  return probabilities;
}

ScoredParse ParserForward(const ModelState& state, const Matrix& vectors) {
  nn::Graph g;
  Binder bind(state, nullptr);
  const graph::ParserHidden hidden = graph::ParserScores(g, bind, g.Input(vectors));
  ScoredParse parse;
  parse.arc_scores = g.value(hidden.arc_scores);

  const Matrix& dep = g.value(hidden.rel_dep);
  const Matrix& head = g.value(hidden.rel_head);
  const Matrix& weights = state.group(kHeadGroup).Get("rel_u").value;
  const Eigen::Index d = head.cols();
  const int relations = static_cast<int>(weights.cols() / d);
  const int n = parse.size();
  parse.relation_probabilities.assign(n, Matrix(n + 1, relations));
  for (int r = 0; r < relations; ++r) {
    // (n + 1) x (n + 1) scores for label r, rows dependents, columns heads.
    const Matrix scores = dep * weights.middleCols(r * d, d) * head.transpose();
    for (int i = 0; i < n; ++i) {
      parse.relation_probabilities[i].col(r) = scores.row(i + 1).transpose();
    }
  }
  for (Matrix& m : parse.relation_probabilities) SoftmaxRows(m);
  return parse;
}

}  // namespace tagprobe
