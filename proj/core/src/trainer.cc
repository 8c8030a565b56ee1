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

#include "tagprobe/trainer.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <spdlog/spdlog.h>

#include "tagprobe/errors.h"
#include "tagprobe/network.h"

namespace tagprobe {
namespace {

using nn::Var;

struct SentenceLoss {
  Var loss;
  int tokens = 0;
};

// Drops tokens past the length limit; arcs into the dropped part are not
// scored.
Sentence Truncated(const Sentence& sentence, int limit) {
  Sentence cut;
  cut.sent_id = sentence.sent_id;
  cut.tokens.assign(sentence.tokens.begin(), sentence.tokens.begin() + limit);
  return cut;
}

SentenceLoss BuildLoss(nn::Graph& g, const Binder& bind, const Sentence& full,
                       const TagSequence* full_tags) {
  const ModelState& state = bind.state();
  const int limit = state.config.max_sentence_length;
  const Sentence* sentence = &full;
  const TagSequence* tags = full_tags;
  Sentence cut;
  TagSequence cut_tags;
  if (static_cast<int>(full.size()) > limit) {
    spdlog::warn("sentence '{}' has {} tokens; training on the first {}", full.sent_id,
                 full.size(), limit);
    cut = Truncated(full, limit);
    sentence = &cut;
    if (full_tags) {
      cut_tags.assign(full_tags->begin(), full_tags->begin() + limit);
      tags = &cut_tags;
    }
  }
  const int n = static_cast<int>(sentence->size());
  Var vectors = graph::Encode(g, bind, *sentence, tags);
  SentenceLoss result;
  result.tokens = n;
  if (state.head == HeadKind::kTagger) {
    std::vector<int> targets;
    targets.reserve(n);
    for (const Token& token : sentence->tokens) {
      const std::optional<Upos> tag = token.tag();
      if (!tag) throw InvalidArgument("unknown gold UPOS '" + token.upos + "'");
      targets.push_back(UposIndex(*tag));
    }
    result.loss = g.SoftmaxCrossEntropy(graph::TaggerLogits(g, bind, vectors),
                                        std::move(targets));
    return result;
  }
  const graph::ParserHidden hidden = graph::ParserScores(g, bind, vectors);
  std::vector<int> heads(n);
  std::vector<int> relation_targets(n);
  std::vector<int> dependents(n);
  std::vector<int> gold_heads(n);
  for (int i = 0; i < n; ++i) {
    const Token& token = sentence->tokens[i];
    const bool scored = token.head <= n;
    heads[i] = scored ? token.head : -1;
    dependents[i] = i + 1;
    gold_heads[i] = scored ? token.head : 0;
    relation_targets[i] = scored ? state.vocabulary.RelationId(token.deprel) : -1;
  }
  Var arc_loss = g.SoftmaxCrossEntropy(hidden.arc_scores, std::move(heads));
  Var rel_loss = g.SoftmaxCrossEntropy(
      graph::RelationLogits(g, bind, hidden, dependents, gold_heads),
      std::move(relation_targets));
  const Var parts[] = {arc_loss, rel_loss};
  result.loss = g.Sum(parts);
  return result;
}

const TagSequence* TagsFor(const TagInputs* inputs, std::size_t index) {
  return inputs ? &(*inputs)[index] : nullptr;
}

void CheckTagInputs(const ModelState& state, const Treebank& data,
                    const TagInputs* tags, const char* split) {
  const bool wants = state.config.use_tags && !state.withhold_tags;
  if (wants && !tags) {
    throw InvalidArgument(std::string("parser uses tag inputs but none were given for ") +
                          split);
  }
  if (!wants && tags) {
    throw InvalidArgument(std::string("tag inputs given for ") + split +
                          " but the encoder does not consume tags");
  }
  if (tags && tags->size() != data.size()) {
    throw InvalidArgument(std::string("tag inputs for ") + split +
                          " do not cover every sentence");
  }
}

double DevMetric(const ModelState& state, const Treebank& dev, const TagInputs* tags,
                 DecoderKind decoder) {
  if (state.head == HeadKind::kTagger) return PredictTags(state, dev).accuracy;
  return AttachmentScores(PredictTrees(state, dev, tags, decoder), dev).las;
}

}  // namespace

void TrainConfig::Validate(bool early_stopping) const {
  if (learning_rate <= 0.0) throw InvalidArgument("learning rate must be positive");
  if (beta1 < 0.0 || beta1 >= 1.0 || beta2 < 0.0 || beta2 >= 1.0) {
    throw InvalidArgument("Adam betas must be in [0, 1)");
  }
  if (batch_size <= 0) throw InvalidArgument("batch size must be positive");
  if (max_epochs <= 0) throw InvalidArgument("max_epochs must be positive");
  if (patience <= 0) throw InvalidArgument("patience must be positive");
  if (early_stopping && max_epochs > 1 && patience >= max_epochs) {
    throw InvalidArgument("patience must be below max_epochs");
  }
}

std::string TrainHistory::ToCsv() const {
  std::ostringstream out;
  out.precision(17);
  out << "epoch,train_loss,dev_metric\n";
  for (const EpochRecord& e : epochs) {
    out << e.epoch << ',' << e.train_loss << ',' << e.dev_metric << '\n';
  }
  return out.str();
}

TrainResult Train(ModelState state, const Treebank& train, const Treebank& dev,
                  const TrainConfig& config, const TagInputs* train_tags,
                  const TagInputs* dev_tags, const TrainOptions& options) {
  config.Validate(options.select_on_dev);
  if (train.TokenCount() == 0) throw InvalidArgument("training split is empty");
  if (options.select_on_dev && dev.TokenCount() == 0) {
    throw InvalidArgument("development split is empty");
  }
  CheckTagInputs(state, train, train_tags, "train");
  if (options.select_on_dev) CheckTagInputs(state, dev, dev_tags, "dev");

  std::mt19937_64 rng(config.seed);
  nn::Gradients gradients(state.groups);
  nn::AdamOptimizer optimizer(
      {config.learning_rate, config.beta1, config.beta2, config.epsilon}, state.groups);

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (train.sentences[i].size() > 0) order.push_back(i);
  }

  TrainHistory history;
  std::vector<nn::ParameterGroup> best_groups;
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    std::int64_t epoch_tokens = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      gradients.Zero();
      int batch_tokens = 0;
      for (std::size_t k = start; k < end; ++k) {
        const std::size_t index = order[k];
        nn::Graph g(/*training=*/true, &rng);
        Binder bind(state, &gradients);
        const SentenceLoss loss =
            BuildLoss(g, bind, train.sentences[index], TagsFor(train_tags, index));
        g.Backward(loss.loss);
        epoch_loss += g.value(loss.loss)(0, 0);
        batch_tokens += loss.tokens;
      }
      epoch_tokens += batch_tokens;
      gradients.Scale(1.0 / std::max(batch_tokens, 1));
      if (config.clip_norm > 0.0) {
        const double norm = std::sqrt(gradients.SquaredNorm());
        if (norm > config.clip_norm) gradients.Scale(config.clip_norm / norm);
      }
      optimizer.Step(state.groups, gradients);
      ++state.optimizer_steps;
      ++history.steps;
    }

    EpochRecord record;
    record.epoch = epoch;
    record.train_loss = epoch_loss / std::max<std::int64_t>(epoch_tokens, 1);
    bool stop = false;
    if (options.select_on_dev) {
      record.dev_metric = DevMetric(state, dev, dev_tags, config.decoder);
      if (history.best_epoch == 0 || record.dev_metric > history.best_dev_metric) {
        history.best_epoch = epoch;
        history.best_dev_metric = record.dev_metric;
        best_groups = state.groups;
      } else if (epoch - history.best_epoch >= config.patience) {
        stop = true;
      }
    }
    history.epochs.push_back(record);
    spdlog::debug("epoch {} loss {:.5f} dev {:.4f}", epoch, record.train_loss,
                  record.dev_metric);
    if (options.on_epoch) options.on_epoch(record);
    if (stop) break;
  }
  if (options.select_on_dev) {
    state.groups = std::move(best_groups);
  } else {
    history.best_epoch = static_cast<int>(history.epochs.size());
  }
  return {std::move(state), std::move(history)};
}

double EvaluateLoss(const ModelState& state, const Treebank& data, const TagInputs* tags) {
  double total = 0.0;
  std::int64_t tokens = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.sentences[i].size() == 0) continue;
    nn::Graph g;
    Binder bind(state, nullptr);
    const SentenceLoss loss = BuildLoss(g, bind, data.sentences[i], TagsFor(tags, i));
    total += g.value(loss.loss)(0, 0);
    tokens += loss.tokens;
  }
  return tokens == 0 ? 0.0 : total / tokens;
}

TagPredictions PredictTags(const ModelState& state, const Treebank& treebank) {
  TagPredictions result;
  result.tags.reserve(treebank.size());
  for (const Sentence& sentence : treebank.sentences) {
    std::vector<Upos>& row = result.tags.emplace_back();
    if (sentence.size() == 0) continue;
    const nn::Matrix probabilities = TaggerForward(state, Encode(state, sentence));
    row.reserve(sentence.size());
    for (Eigen::Index t = 0; t < probabilities.rows(); ++t) {
      Eigen::Index best = 0;
      probabilities.row(t).maxCoeff(&best);
      row.push_back(UposFromIndex(static_cast<int>(best)));
    }
  }
  result.errors = CollectErrors(result.tags, treebank);
  const std::size_t total = treebank.TokenCount();
  result.accuracy =
      total == 0 ? 0.0 : 1.0 - static_cast<double>(result.errors.size()) / total;
  return result;
}

std::vector<PredictedTree> PredictTrees(const ModelState& state, const Treebank& treebank,
                                        const TagInputs* tags, DecoderKind decoder) {
  CheckTagInputs(state, treebank, tags, treebank.name.empty() ? "input" : treebank.name.c_str());
  const std::vector<std::string>& relations = state.vocabulary.relations();
  std::vector<PredictedTree> trees;
  trees.reserve(treebank.size());
  for (std::size_t i = 0; i < treebank.size(); ++i) {
    const Sentence& sentence = treebank.sentences[i];
    PredictedTree& tree = trees.emplace_back();
    if (sentence.size() == 0) continue;
    const ScoredParse parse =
        ParserForward(state, Encode(state, sentence, TagsFor(tags, i)));
    for (const Arc& arc : DecodeTree(parse, decoder)) {
      tree.push_back({arc.head, relations.empty() ? std::string("dep")
                                                  : relations[arc.relation]});
    }
  }
  return trees;
}

Treebank WithPredictedTrees(const Treebank& treebank,
                            const std::vector<PredictedTree>& trees) {
  if (trees.size() != treebank.size()) {
    throw InvalidArgument("predicted trees do not cover the treebank");
  }
  Treebank out = treebank;
  for (std::size_t s = 0; s < out.size(); ++s) {
    Sentence& sentence = out.sentences[s];
    if (trees[s].size() != sentence.size()) {
      throw InvalidArgument("predicted tree has the wrong length");
    }
    for (std::size_t t = 0; t < sentence.size(); ++t) {
      sentence.tokens[t].head = trees[s][t].head;
      sentence.tokens[t].deprel = trees[s][t].deprel;
    }
  }
  return out;
}

Treebank WithPredictedTags(const Treebank& treebank,
                           const std::vector<std::vector<Upos>>& tags) {
  if (tags.size() != treebank.size()) {
    throw InvalidArgument("predicted tags do not cover the treebank");
  }
  Treebank out = treebank;
  for (std::size_t s = 0; s < out.size(); ++s) {
    Sentence& sentence = out.sentences[s];
    if (tags[s].size() != sentence.size()) {
      throw InvalidArgument("predicted tags have the wrong length");
    }
    for (std::size_t t = 0; t < sentence.size(); ++t) {
      sentence.tokens[t].upos = UposName(tags[s][t]);
    }
  }
  return out;
}

}  // namespace tagprobe
