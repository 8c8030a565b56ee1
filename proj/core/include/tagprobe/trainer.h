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

#ifndef TAGPROBE_TRAINER_H_
#define TAGPROBE_TRAINER_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tagprobe/conllu.h"
#include "tagprobe/decoder.h"
#include "tagprobe/error_set.h"
#include "tagprobe/evaluation.h"
#include "tagprobe/model.h"

namespace tagprobe {

struct TrainConfig {
  double learning_rate = 2e-3;
  double beta1 = 0.9;
  double beta2 = 0.9;
  double epsilon = 1e-8;
  int batch_size = 30;  // sentences
  int max_epochs = 200;
  int patience = 20;  // epochs without dev improvement before stopping
  std::uint64_t seed = 1;
  double clip_norm = 5.0;  // <= 0 disables clipping
  DecoderKind decoder = DecoderKind::kChuLiuEdmonds;

  // patience < max_epochs is only required with early stopping and more
  // than one epoch; a single epoch cannot stop early.
  void Validate(bool early_stopping = true) const;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;  // mean per token over the epoch
  double dev_metric = 0.0;  // accuracy (tagger) or LAS (parser)
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  int best_epoch = 0;
  double best_dev_metric = 0.0;
  std::int64_t steps = 0;  // optimizer steps taken in this run

  // "epoch,train_loss,dev_metric" rows.
  std::string ToCsv() const;
};

struct TrainResult {
  ModelState state;
  TrainHistory history;
};

// Per-sentence tag inputs for a parser that consumes tags.
using TagInputs = std::vector<TagSequence>;

struct TrainOptions {
  // Evaluate on dev after every epoch, keep the best snapshot and stop early.
  // When false, all max_epochs run and the final parameters are returned.
  bool select_on_dev = true;
  std::function<void(const EpochRecord&)> on_epoch;
};

// Trains the groups of `state` that are marked trainable. Batches of
// config.batch_size sentences are drawn from a seeded shuffle each epoch; the
// loss is cross-entropy over tags (tagger) or arc plus relation cross-entropy
// at the gold arcs (parser). Throws InvalidArgument on an empty train or dev
// split or when tag inputs do not match the encoder.
TrainResult Train(ModelState state, const Treebank& train, const Treebank& dev,
                  const TrainConfig& config, const TagInputs* train_tags = nullptr,
                  const TagInputs* dev_tags = nullptr, const TrainOptions& options = {});

// Mean per-token loss on `data` in evaluation mode.
double EvaluateLoss(const ModelState& state, const Treebank& data,
                    const TagInputs* tags = nullptr);

struct TagPredictions {
  std::vector<std::vector<Upos>> tags;
  ErrorSet errors;
  double accuracy = 0.0;
};

// Argmax tags from a tagger head, with errors against the gold UPOS column.
TagPredictions PredictTags(const ModelState& state, const Treebank& treebank);

std::vector<PredictedTree> PredictTrees(const ModelState& state, const Treebank& treebank,
                                        const TagInputs* tags = nullptr,
                                        DecoderKind decoder = DecoderKind::kChuLiuEdmonds);

// Copy of `treebank` with the predicted heads and relations written in.
Treebank WithPredictedTrees(const Treebank& treebank,
                            const std::vector<PredictedTree>& trees);
// Copy of `treebank` with predicted UPOS written into column 4.
Treebank WithPredictedTags(const Treebank& treebank,
                           const std::vector<std::vector<Upos>>& tags);

}  // namespace tagprobe

#endif  // TAGPROBE_TRAINER_H_
