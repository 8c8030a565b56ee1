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

#ifndef TAGPROBE_NETWORK_H_
#define TAGPROBE_NETWORK_H_

#include <string_view>
#include <vector>

#include "tagprobe/conllu.h"
#include "tagprobe/model.h"
#include "tagprobe/nn/graph.h"

namespace tagprobe {

// Arc and relation scores for one sentence of n tokens.
struct ScoredParse {
  // n x (n + 1): row i - 1 scores the heads of token i, column 0 is ROOT.
  nn::Matrix arc_scores;
  // n entries of (n + 1) x relations; row h is the label distribution for
  // attaching token i to head h.
  std::vector<nn::Matrix> relation_probabilities;

  int size() const { return static_cast<int>(arc_scores.rows()); }
};

// Binds model parameters into a graph. With a Gradients object, parameters
// the model updates receive gradient sinks; without one everything is
// treated as a constant.
class Binder {
 public:
  Binder(const ModelState& state, nn::Gradients* gradients)
      : state_(state), gradients_(gradients) {}

  nn::Var operator()(nn::Graph& graph, GroupId group, std::string_view name) const;
  nn::Var Lookup(nn::Graph& graph, GroupId group, std::string_view name,
                 std::vector<int> ids) const;
  const ModelState& state() const { return state_; }

 private:
  nn::Matrix* Sink(GroupId group, int index) const;

  const ModelState& state_;
  nn::Gradients* gradients_;
};

// Graph builders shared by training and inference.
namespace graph {

// Word (+ char, + tag) embeddings through the BiLSTM stack. Returns one row
// per token, preceded by the ROOT row when state.root_position is set. Tags
// must be given iff the encoder uses tags and does not withhold them.
nn::Var Encode(nn::Graph& g, const Binder& bind, const Sentence& sentence,
               const TagSequence* tags);

// Tagger logits over the 17 UPOS tags for the token rows (ROOT excluded).
nn::Var TaggerLogits(nn::Graph& g, const Binder& bind, nn::Var vectors);

struct ParserHidden {
  nn::Var arc_scores;  // n x (n + 1)
  nn::Var rel_dep;     // (n + 1) x (rel_mlp_dim + 1), row 0 is ROOT
  nn::Var rel_head;
};

ParserHidden ParserScores(nn::Graph& g, const Binder& bind, nn::Var vectors);

// Relation logits for the arcs (dependents[k] <- heads[k]), 1-based
// dependents and 0-based-on-ROOT heads.
nn::Var RelationLogits(nn::Graph& g, const Binder& bind, const ParserHidden& hidden,
                       const std::vector<int>& dependents,
                       const std::vector<int>& heads);

}  // namespace graph

// Inference (dropout off). Encode returns the contextual vectors, width
// 2 * lstm_size, one row per token plus a leading ROOT row for parsers.
nn::Matrix Encode(const ModelState& state, const Sentence& sentence,
                  const TagSequence* tags = nullptr);
// Per-token probabilities over the 17 UPOS tags; rows sum to 1.
nn::Matrix TaggerForward(const ModelState& state, const nn::Matrix& vectors);
ScoredParse ParserForward(const ModelState& state, const nn::Matrix& vectors);

}  // namespace tagprobe

#endif  // TAGPROBE_NETWORK_H_
