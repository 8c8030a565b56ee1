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

#include "tagprobe/probe.h"

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "tagprobe/errors.h"

namespace tagprobe {
namespace {

std::string SplitLabel(const Treebank& t) {
  std::string label(SplitName(t.split));
  return t.name.empty() ? label : t.name + ":" + label;
}

// Seed stream for the probe head, kept apart from the one used to initialise
// the source model.
constexpr std::uint64_t kProbeSeedSalt = 0x9e3779b97f4a7c15ULL;

}  // namespace

ProbeResult ProbeAsTagger(const ModelState& state, const Treebank& train, const Treebank& eval,
                          const TrainConfig& config) {
  if (state.optimizer_steps == 0) {
    throw InvalidArgument("probe source has never been trained");
  }
  if (state.head == HeadKind::kParser && state.tag_scheme == "gold") {
    throw InvalidArgument("probing a parser trained on gold tags would leak the labels");
  }

  ProbeResult result;
  ModelState& probe = result.probe;
  probe = state;
  if (probe.config.use_tags && !probe.withhold_tags) {
    probe.withhold_tags = true;
    result.report.tags_withheld = true;
  }
  AttachTaggerHead(probe, config.seed ^ kProbeSeedSalt);
  const nn::ParameterGroup& head = probe.group(kHeadGroup);
  const nn::Matrix& mlp = head.Get("mlp_w").value;
  if (mlp.rows() != probe.config.OutputDim() ||
      head.Get("out_w").value.cols() != kNumUpos) {
    throw InvalidArgument("probe head shape does not match the encoder");
  }
  for (int id = 0; id < kNumGroups; ++id) {
    probe.SetTrainable(static_cast<GroupId>(id), id == kHeadGroup);
  }

  ProbeReport& report = result.report;
  report.source = state.head;
  report.seed = config.seed;
  report.train_sentences = train.size();
  report.frozen_checksum_before = FrozenChecksum(probe);

  TrainConfig one_epoch = config;
  one_epoch.max_epochs = 1;
  TrainOptions options;
  options.select_on_dev = false;
  TrainResult trained = Train(std::move(probe), train, eval, one_epoch, nullptr, nullptr, options);
  probe = std::move(trained.state);
  report.steps = trained.history.steps;
  report.frozen_checksum_after = FrozenChecksum(probe);
  if (!report.encoder_unchanged()) {
    throw Error("encoder parameters changed while fitting the probe");
  }

  TagPredictions predictions = PredictTags(probe, eval);
  report.split = SplitLabel(eval);
  report.accuracy = predictions.accuracy;
  report.errors = std::move(predictions.errors);
  spdlog::info("probe on {} accuracy {:.4f} after {} steps", report.split, report.accuracy,
               report.steps);
  return result;
}

ProbeResult ValidateProbe(const ModelState& tagger, const Treebank& train, const Treebank& eval,
                          const TrainConfig& config) {
  if (tagger.head != HeadKind::kTagger) {
    throw InvalidArgument("probe validation needs a tagger");
  }
  ProbeResult result = ProbeAsTagger(tagger, train, eval, config);
  result.report.source_accuracy = PredictTags(tagger, eval).accuracy;
  return result;
}

ProbeReport EvaluateProbe(const ProbeResult& probe, const Treebank& eval) {
  ProbeReport report = probe.report;
  TagPredictions predictions = PredictTags(probe.probe, eval);
  report.split = SplitLabel(eval);
  report.accuracy = predictions.accuracy;
  report.errors = std::move(predictions.errors);
  report.source_accuracy.reset();
  return report;
}

std::string ProbeReportJson(const ProbeReport& report) {
  using Json = nlohmann::ordered_json;
  Json errors = Json::array();
  for (const ErrorRecord& r : report.errors.records()) {
    errors.push_back(Json{{"sentence", r.sentence_index},
                          {"token", r.token_index},
                          {"gold", UposName(r.gold)},
                          {"predicted", UposName(r.predicted)}});
  }
  Json j{{"source", HeadKindName(report.source)},
         {"split", report.split},
         {"accuracy", report.accuracy},
         {"source_accuracy",
          report.source_accuracy ? Json(*report.source_accuracy) : Json(nullptr)},
         {"steps", report.steps},
         {"train_sentences", report.train_sentences},
         {"tags_withheld", report.tags_withheld},
         {"seed", report.seed},
         {"frozen_checksum_before", report.frozen_checksum_before},
         {"frozen_checksum_after", report.frozen_checksum_after},
         {"error_count", report.errors.size()},
         {"errors", errors}};
  return j.dump(2) + "\n";
}

}  // namespace tagprobe
