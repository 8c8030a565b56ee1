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

#ifndef TAGPROBE_MODEL_H_
#define TAGPROBE_MODEL_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tagprobe/embeddings.h"
#include "tagprobe/nn/parameters.h"
#include "tagprobe/vocabulary.h"

namespace tagprobe {

// Layer sizes of the shared encoder and of both heads. Defaults are the
// values used for full-size experiments.
struct EncoderConfig {
  int word_dim = 100;
  int char_dim = 100;          // character summary fed to the BiLSTM
  int char_lstm_input = 100;   // character embedding width
  int char_lstm_size = 100;    // per direction
  int tag_dim = 100;
  bool use_tags = false;
  int lstm_layers = 3;
  int lstm_size = 200;  // per direction
  double dropout = 0.33;
  int tagger_mlp_dim = 100;
  int arc_mlp_dim = 100;
  int rel_mlp_dim = 50;
  int max_sentence_length = 512;

  int InputDim() const { return word_dim + char_dim + (use_tags ? tag_dim : 0); }
  int OutputDim() const { return 2 * lstm_size; }
  // Throws InvalidArgument unless every size is positive and dropout is in
  // [0, 1).
  void Validate() const;

  friend bool operator==(const EncoderConfig&, const EncoderConfig&) = default;
};

enum class HeadKind { kTagger, kParser };

std::string_view HeadKindName(HeadKind kind);

// Parameter groups, in checkpoint order.
enum GroupId : int {
  kEmbeddingGroup = 0,
  kCharEncoderGroup = 1,
  kBilstmGroup = 2,
  kHeadGroup = 3,
  kNumGroups = 4,
};

std::string_view GroupName(GroupId group);

// Encoder and head parameters plus everything needed to run them.
struct ModelState {
  static constexpr int kFormatVersion = 1;

  EncoderConfig config;
  HeadKind head = HeadKind::kTagger;
  // The encoder prepends a learned ROOT position. Set for parsers, and kept
  // by probes built on a parser encoder.
  bool root_position = false;
  // Tag inputs are replaced by MASK at every position.
  bool withhold_tags = false;
  Vocabulary vocabulary;
  // Rows of the fixed pre-trained table; row 0 is the unknown vector.
  std::vector<std::string> embedding_words;
  std::unordered_map<std::string, int> embedding_index;
  std::vector<nn::ParameterGroup> groups;
  std::int64_t optimizer_steps = 0;
  // Tag conditioning the parser was trained with ("" for taggers).
  std::string tag_scheme;

  bool has_pretrained() const { return !embedding_words.empty(); }
  // Row of the word-embedding table for `form`.
  int WordRow(std::string_view form) const;
  nn::ParameterGroup& group(GroupId id) { return groups[id]; }
  const nn::ParameterGroup& group(GroupId id) const { return groups[id]; }
  void SetTrainable(GroupId id, bool trainable) { groups[id].trainable = trainable; }
};

// Builds a freshly initialised model. With `pretrained`, word vectors come
// from that table (its width must equal config.word_dim) and stay fixed;
// otherwise a trainable word embedding over the vocabulary is created.
ModelState InitializeModel(const EncoderConfig& config, HeadKind head,
                           Vocabulary vocabulary,
                           const EmbeddingTable* pretrained, std::uint64_t seed);

// Replaces the head group with a newly initialised tagger head.
void AttachTaggerHead(ModelState& state, std::uint64_t seed);

// SHA-256 (hex) over names, shapes and raw bytes of a group's tensors.
std::string GroupChecksum(const nn::ParameterGroup& group);
// Digest over every group whose trainable flag is false.
std::string FrozenChecksum(const ModelState& state);

// Binary archive: magic, version, JSON metadata (config, vocabulary, tensor
// directory), then raw tensor data. Loading restores every value bit-exactly.
void SaveCheckpoint(const ModelState& state, std::ostream& out);
ModelState LoadCheckpoint(std::istream& in);
void SaveCheckpointFile(const ModelState& state, const std::filesystem::path& path);
ModelState LoadCheckpointFile(const std::filesystem::path& path);

}  // namespace tagprobe

#endif  // TAGPROBE_MODEL_H_
