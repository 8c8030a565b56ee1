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

#ifndef TAGPROBE_EXPERIMENT_H_
#define TAGPROBE_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tagprobe/conllu.h"
#include "tagprobe/embeddings.h"
#include "tagprobe/model.h"
#include "tagprobe/tag_masking.h"
#include "tagprobe/trainer.h"

namespace tagprobe {

std::string_view Version();

struct TreebankPaths {
  std::string name;
  std::filesystem::path train;
  std::filesystem::path dev;
  std::filesystem::path test;

  friend bool operator==(const TreebankPaths&, const TreebankPaths&) = default;
};

// Everything a command needs, read from a JSON file and then overridden by
// command-line flags.
struct ExperimentConfig {
  std::vector<TreebankPaths> treebanks;
  std::optional<std::filesystem::path> embeddings;
  EncoderConfig encoder;
  TrainConfig tagger_train;
  TrainConfig parser_train;
  std::vector<std::uint64_t> seeds = {1};
  std::vector<SchemeKind> schemes = AllSchemes();
  std::filesystem::path out = "out";
  int jobs = 1;
  HeadKind kind = HeadKind::kParser;
  bool svg = false;

  // Throws InvalidArgument naming the offending field or missing file.
  void Validate(bool need_dev = true, bool need_test = true) const;
};

// Reads a config (or an experiment manifest, whose "config" member is used).
// Relative paths resolve against the file's directory. Unknown keys are
// rejected.
ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path);
ExperimentConfig ParseExperimentConfig(std::string_view json,
                                       const std::filesystem::path& base_dir = {});
// Canonical JSON with every field spelled out; parses back to an equal config.
std::string ExperimentConfigJson(const ExperimentConfig& config);
// SHA-256 of the canonical JSON.
std::string ConfigDigest(const ExperimentConfig& config);

// A small configuration that trains on the synthetic treebank in minutes.
ExperimentConfig ToyExperimentConfig();

struct LoadedTreebank {
  TreebankSplits splits;
  // Word vectors restricted to forms seen in any split and compressed to
  // encoder.word_dim when wider; absent without an embeddings path.
  std::optional<EmbeddingTable> embeddings;
};

// Reads the splits of one treebank; dev and test may be empty paths.
TreebankSplits ReadTreebank(const TreebankPaths& paths);
// Loads and, if needed, compresses the configured embeddings for `splits`.
std::optional<EmbeddingTable> LoadEmbeddingsFor(const ExperimentConfig& config,
                                                const TreebankSplits& splits);

// Creates checkpoints/, reports/, tables/ and figures/ under `out`.
void PrepareOutputDirectory(const std::filesystem::path& out);

// Writes `out`/manifest.json recording the command, resolved config, its
// digest, the seeds and the tool version. `outputs` are listed relative to
// `out`.
void WriteManifest(const std::filesystem::path& out, std::string_view command,
                   const ExperimentConfig& config,
                   const std::vector<std::filesystem::path>& outputs);

// Writes text to `path`, creating parent directories.
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

}  // namespace tagprobe

#endif  // TAGPROBE_EXPERIMENT_H_
