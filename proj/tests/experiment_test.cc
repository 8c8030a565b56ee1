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

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include <gtest/gtest.h>

#include "tagprobe/errors.h"
#include "tagprobe/experiment.h"
#include "test_support.h"

namespace tagprobe {
namespace {

namespace fs = std::filesystem;

TEST(ExperimentConfigTest, ParsesAndResolvesRelativePaths) {
  ExperimentConfig c = ParseExperimentConfig(R"({
    "treebanks": [{"name": "en", "train": "a/train.conllu", "dev": "a/dev.conllu"}],
    "encoder": {"word_dim": 12, "lstm_layers": 1},
    "training": {"max_epochs": 7, "patience": 3},
    "parser_training": {"batch_size": 4},
    "seeds": [3, 4],
    "schemes": ["gold", "MnotE_T"],
    "jobs": 2,
    "kind": "tagger"
  })",
                                             "/base");
  ASSERT_EQ(c.treebanks.size(), 1u);
  EXPECT_EQ(c.treebanks[0].train, fs::path("/base/a/train.conllu"));
  EXPECT_EQ(c.treebanks[0].dev, fs::path("/base/a/dev.conllu"));
  EXPECT_TRUE(c.treebanks[0].test.empty());
  EXPECT_EQ(c.encoder.word_dim, 12);
  EXPECT_EQ(c.encoder.lstm_layers, 1);
  EXPECT_EQ(c.encoder.lstm_size, EncoderConfig().lstm_size);
  EXPECT_EQ(c.tagger_train.max_epochs, 7);
  EXPECT_EQ(c.parser_train.max_epochs, 7);
  EXPECT_EQ(c.parser_train.batch_size, 4);
  EXPECT_EQ(c.tagger_train.batch_size, TrainConfig().batch_size);
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{3, 4}));
  EXPECT_EQ(c.schemes,
            (std::vector<SchemeKind>{SchemeKind::kGold, SchemeKind::kMaskAllButTaggerErrors}));
  EXPECT_EQ(c.jobs, 2);
  EXPECT_EQ(c.kind, HeadKind::kTagger);
}

TEST(ExperimentConfigTest, RejectsUnknownKeysAndValues) {
  EXPECT_THROW(ParseExperimentConfig(R"({"seed": 1})"), Error);
  EXPECT_THROW(ParseExperimentConfig(R"({"encoder": {"width": 1}})"), Error);
  EXPECT_THROW(ParseExperimentConfig(R"({"schemes": ["sometimes"]})"), Error);
  EXPECT_THROW(ParseExperimentConfig(R"({"kind": "lemmatizer"})"), Error);
  EXPECT_THROW(ParseExperimentConfig("{not json"), Error);
}

TEST(ExperimentConfigTest, CanonicalJsonRoundTrips) {
  ExperimentConfig c = ToyExperimentConfig();
  c.treebanks = {{"toy", "/d/train.conllu", "/d/dev.conllu", "/d/test.conllu"}};
  c.seeds = {5, 6};
  const std::string text = ExperimentConfigJson(c);
  ExperimentConfig back = ParseExperimentConfig(text);
  EXPECT_EQ(ExperimentConfigJson(back), text);
  EXPECT_EQ(ConfigDigest(back), ConfigDigest(c));
  EXPECT_EQ(ConfigDigest(c).size(), 64u);
  back.seeds = {5};
  EXPECT_NE(ConfigDigest(back), ConfigDigest(c));
}

TEST(ExperimentConfigTest, ValidateNamesMissingFiles) {
  ExperimentConfig c;
  c.treebanks = {{"x", "/nonexistent/train.conllu", "", ""}};
  try {
    c.Validate(false, false);
    FAIL() << "expected an exception";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/train.conllu"), std::string::npos);
  }
}

TEST(ExperimentOutputTest, ManifestRecordsDigestAndOutputs) {
  const fs::path dir = fs::temp_directory_path() / "tagprobe_manifest_test";
  fs::remove_all(dir);
  PrepareOutputDirectory(dir);
  for (const char* sub : {"checkpoints", "reports", "tables", "figures"}) {
    EXPECT_TRUE(fs::is_directory(dir / sub));
  }
  ExperimentConfig c = ToyExperimentConfig();
  c.seeds = {9};
  c.out = dir;
  WriteTextFile(dir / "tables" / "x.csv", "a\n");
  WriteManifest(dir, "mask-experiment", c, {dir / "tables" / "x.csv"});
  std::ifstream in(dir / "manifest.json");
  nlohmann::json j = nlohmann::json::parse(in);
  EXPECT_EQ(j["command"], "mask-experiment");
  EXPECT_EQ(j["config_sha256"], ConfigDigest(c));
  EXPECT_EQ(j["seeds"], nlohmann::json::array({9}));
  EXPECT_EQ(j["outputs"], nlohmann::json::array({"tables/x.csv"}));
  // A manifest is itself a loadable config.
  EXPECT_EQ(ConfigDigest(LoadExperimentConfig(dir / "manifest.json")), ConfigDigest(c));
  fs::remove_all(dir);
}

}  // namespace
}  // namespace tagprobe
