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

#ifndef TAGPROBE_PROBE_H_
#define TAGPROBE_PROBE_H_

#include <cstdint>
#include <optional>
#include <string>

#include "tagprobe/conllu.h"
#include "tagprobe/error_set.h"
#include "tagprobe/model.h"
#include "tagprobe/trainer.h"

namespace tagprobe {

// Outcome of fitting a fresh tagging head on a frozen encoder.
struct ProbeReport {
  HeadKind source = HeadKind::kParser;
  std::string split;  // name of the evaluated split
  double accuracy = 0.0;
  ErrorSet errors;
  // Accuracy of the source's own head on the same split; tagger sources only.
  std::optional<double> source_accuracy;
  std::string frozen_checksum_before;
  std::string frozen_checksum_after;
  std::int64_t steps = 0;
  std::size_t train_sentences = 0;
  bool tags_withheld = false;
  std::uint64_t seed = 0;

  bool encoder_unchanged() const { return frozen_checksum_before == frozen_checksum_after; }
};

struct ProbeResult {
  ModelState probe;  // the fitted probe, usable with PredictTags
  ProbeReport report;
};

// Swaps the head of a trained parser (or tagger) for a newly seeded tagger
// head, freezes every other group and trains the head for exactly one epoch
// on `train`, then scores it on `eval`. A parser that consumed tags has them
// replaced by MASK. Throws InvalidArgument for an untrained state, for a
// parser conditioned on gold tags and if the encoder changes during training.
ProbeResult ProbeAsTagger(const ModelState& state, const Treebank& train, const Treebank& eval,
                          const TrainConfig& config);

// ProbeAsTagger for a tagger source; also reports the original head's
// accuracy on `eval`.
ProbeResult ValidateProbe(const ModelState& tagger, const Treebank& train, const Treebank& eval,
                          const TrainConfig& config);

// Scores an already fitted probe on another split.
ProbeReport EvaluateProbe(const ProbeResult& probe, const Treebank& eval);

// Fixed key order; errors listed in position order.
std::string ProbeReportJson(const ProbeReport& report);

}  // namespace tagprobe

#endif  // TAGPROBE_PROBE_H_
