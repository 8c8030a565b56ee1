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

#include <nlohmann/json.hpp>

#include <gtest/gtest.h>

#include "tagprobe/errors.h"
#include "tagprobe/model.h"
#include "tagprobe/probe.h"
#include "tagprobe/trainer.h"
#include "test_support.h"

namespace tagprobe {
namespace {

using testing::FiveSentenceFixture;
using testing::TinyEncoder;

TrainConfig Quick(std::uint64_t seed = 1) {
  TrainConfig config;
  config.max_epochs = 2;
  config.patience = 1;
  config.batch_size = 2;
  config.seed = seed;
  return config;
}

ModelState TrainedParser(bool use_tags = false) {
  Treebank data = FiveSentenceFixture();
  ModelState state = InitializeModel(TinyEncoder(use_tags), HeadKind::kParser,
                                     Vocabulary::Build(data), nullptr, 11);
  if (!use_tags) return Train(state, data, data, Quick()).state;
  TagInputs tags;
  for (const Sentence& s : data.sentences) tags.emplace_back(s.size(), std::nullopt);
  return Train(state, data, data, Quick(), &tags, &tags).state;
}

TEST(ProbeTest, OneEpochWithFrozenEncoder) {
  Treebank data = FiveSentenceFixture();
  ModelState parser = TrainedParser();
  TrainConfig config = Quick(3);
  config.batch_size = 30;
  ProbeResult result = ProbeAsTagger(parser, data, data, config);
  EXPECT_EQ(result.report.steps, 1);  // ceil(5 / 30)
  EXPECT_EQ(result.report.train_sentences, 5u);
  EXPECT_TRUE(result.report.encoder_unchanged());
  ModelState frozen = parser;
  for (GroupId g : {kEmbeddingGroup, kCharEncoderGroup, kBilstmGroup}) frozen.SetTrainable(g, false);
  EXPECT_EQ(result.report.frozen_checksum_before, FrozenChecksum(frozen));
  EXPECT_EQ(result.probe.head, HeadKind::kTagger);
  EXPECT_EQ(result.report.source, HeadKind::kParser);
  EXPECT_FALSE(result.report.tags_withheld);
  config.batch_size = 2;
  EXPECT_EQ(ProbeAsTagger(parser, data, data, config).report.steps, 3);  // ceil(5 / 2)
}

TEST(ProbeTest, ErrorsMatchAccuracy) {
  Treebank data = FiveSentenceFixture();
  ProbeResult result = ProbeAsTagger(TrainedParser(), data, data, Quick());
  const double tokens = static_cast<double>(data.TokenCount());
  EXPECT_DOUBLE_EQ(result.report.accuracy, 1.0 - result.report.errors.size() / tokens);
  ProbeReport again = EvaluateProbe(result, data);
  EXPECT_EQ(again.errors, result.report.errors);
}

TEST(ProbeTest, Deterministic) {
  Treebank data = FiveSentenceFixture();
  ModelState parser = TrainedParser();
  ProbeResult a = ProbeAsTagger(parser, data, data, Quick(4));
  ProbeResult b = ProbeAsTagger(parser, data, data, Quick(4));
  EXPECT_EQ(GroupChecksum(a.probe.group(kHeadGroup)), GroupChecksum(b.probe.group(kHeadGroup)));
  EXPECT_EQ(a.report.errors, b.report.errors);
}

TEST(ProbeTest, RefusesUntrainedAndGoldConditioned) {
  Treebank data = FiveSentenceFixture();
  ModelState fresh = InitializeModel(TinyEncoder(), HeadKind::kParser, Vocabulary::Build(data),
                                     nullptr, 2);
  EXPECT_THROW(ProbeAsTagger(fresh, data, data, Quick()), InvalidArgument);
  ModelState gold = TrainedParser(true);
  gold.tag_scheme = "gold";
  EXPECT_THROW(ProbeAsTagger(gold, data, data, Quick()), InvalidArgument);
}

TEST(ProbeTest, TagConsumingParserHasTagsWithheld) {
  Treebank data = FiveSentenceFixture();
  ModelState parser = TrainedParser(true);
  parser.tag_scheme = "mask_tagger_errors";
  ProbeResult result = ProbeAsTagger(parser, data, data, Quick());
  EXPECT_TRUE(result.report.tags_withheld);
  EXPECT_TRUE(result.report.encoder_unchanged());
}

TEST(ProbeTest, ValidateProbeReportsSourceAccuracy) {
  Treebank data = FiveSentenceFixture();
  ModelState tagger = InitializeModel(TinyEncoder(), HeadKind::kTagger, Vocabulary::Build(data),
                                      nullptr, 3);
  tagger = Train(tagger, data, data, Quick()).state;
  ProbeResult result = ValidateProbe(tagger, data, data, Quick());
  ASSERT_TRUE(result.report.source_accuracy.has_value());
  EXPECT_DOUBLE_EQ(*result.report.source_accuracy, PredictTags(tagger, data).accuracy);
  EXPECT_THROW(ValidateProbe(TrainedParser(), data, data, Quick()), InvalidArgument);
}

TEST(ProbeTest, JsonHasStableKeys) {
  Treebank data = FiveSentenceFixture();
  ProbeResult result = ProbeAsTagger(TrainedParser(), data, data, Quick());
  const std::string text = ProbeReportJson(result.report);
  EXPECT_EQ(text, ProbeReportJson(result.report));
  nlohmann::json j = nlohmann::json::parse(text);
  EXPECT_EQ(j["steps"], 3);
  EXPECT_EQ(j["errors"].size(), result.report.errors.size());
  EXPECT_EQ(j["frozen_checksum_before"], j["frozen_checksum_after"]);
  EXPECT_EQ(j["error_count"], result.report.errors.size());
}

}  // namespace
}  // namespace tagprobe
