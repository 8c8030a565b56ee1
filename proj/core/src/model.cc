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

#include "tagprobe/model.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "sha256.h"
#include "tagprobe/errors.h"
#include "tagprobe/upos.h"

namespace tagprobe {
namespace {

using nlohmann::json;
using nn::Matrix;

static_assert(std::endian::native == std::endian::little,
              "checkpoints are written in little-endian byte order");

constexpr char kMagic[8] = {'T', 'A', 'G', 'P', 'R', 'O', 'B', 'E'};

void AddLstm(nn::ParameterGroup& group, const std::string& prefix, int input,
             int hidden, std::mt19937_64& rng) {
  group.Add(prefix + "_wx", nn::GlorotUniform(input, 4 * hidden, rng));
  group.Add(prefix + "_wh", nn::GlorotUniform(hidden, 4 * hidden, rng));
  Matrix bias = Matrix::Zero(1, 4 * hidden);
  bias.middleCols(hidden, hidden).setOnes();  // forget gate starts open
  group.Add(prefix + "_b", std::move(bias));
}

void AddAffine(nn::ParameterGroup& group, const std::string& prefix, int input,
               int output, std::mt19937_64& rng) {
  group.Add(prefix + "_w", nn::GlorotUniform(input, output, rng));
  group.Add(prefix + "_b", Matrix::Zero(1, output));
}

nn::ParameterGroup MakeTaggerHead(const EncoderConfig& config,
                                  std::mt19937_64& rng) {
  nn::ParameterGroup head{std::string(GroupName(kHeadGroup)), true, {}};
  AddAffine(head, "mlp", config.OutputDim(), config.tagger_mlp_dim, rng);
  AddAffine(head, "out", config.tagger_mlp_dim, kNumUpos, rng);
  return head;
}

nn::ParameterGroup MakeParserHead(const EncoderConfig& config, int relations,
                                  std::mt19937_64& rng) {
  nn::ParameterGroup head{std::string(GroupName(kHeadGroup)), true, {}};
  const int out = config.OutputDim();
  AddAffine(head, "arc_dep", out, config.arc_mlp_dim, rng);
  AddAffine(head, "arc_head", out, config.arc_mlp_dim, rng);
  AddAffine(head, "rel_dep", out, config.rel_mlp_dim, rng);
  AddAffine(head, "rel_head", out, config.rel_mlp_dim, rng);
  const int arc = config.arc_mlp_dim + 1;
  const int rel = config.rel_mlp_dim + 1;
  head.Add("arc_u", Matrix::Zero(arc, arc));
  head.Add("rel_u", Matrix::Zero(rel, std::max(relations, 1) * rel));
  return head;
}

json ConfigToJson(const EncoderConfig& c) {
  return json{{"word_dim", c.word_dim},
              {"char_dim", c.char_dim},
              {"char_lstm_input", c.char_lstm_input},
              {"char_lstm_size", c.char_lstm_size},
              {"tag_dim", c.tag_dim},
              {"use_tags", c.use_tags},
              {"lstm_layers", c.lstm_layers},
              {"lstm_size", c.lstm_size},
              {"dropout", c.dropout},
              {"tagger_mlp_dim", c.tagger_mlp_dim},
              {"arc_mlp_dim", c.arc_mlp_dim},
              {"rel_mlp_dim", c.rel_mlp_dim},
              {"max_sentence_length", c.max_sentence_length}};
}

EncoderConfig ConfigFromJson(const json& j) {
  EncoderConfig c;
  c.word_dim = j.at("word_dim");
  c.char_dim = j.at("char_dim");
  c.char_lstm_input = j.at("char_lstm_input");
  c.char_lstm_size = j.at("char_lstm_size");
  c.tag_dim = j.at("tag_dim");
  c.use_tags = j.at("use_tags");
  c.lstm_layers = j.at("lstm_layers");
  c.lstm_size = j.at("lstm_size");
  c.dropout = j.at("dropout");
  c.tagger_mlp_dim = j.at("tagger_mlp_dim");
  c.arc_mlp_dim = j.at("arc_mlp_dim");
  c.rel_mlp_dim = j.at("rel_mlp_dim");
  c.max_sentence_length = j.at("max_sentence_length");
  return c;
}

void RebuildEmbeddingIndex(ModelState& state) {
  state.embedding_index.clear();
  for (std::size_t i = 1; i < state.embedding_words.size(); ++i) {
    state.embedding_index.emplace(state.embedding_words[i], static_cast<int>(i));
  }
}

template <typename T>
void WritePod(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T ReadPod(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw ParseError("truncated checkpoint", 0);
  return value;
}

}  // namespace

void EncoderConfig::Validate() const {
  for (int value : {word_dim, char_dim, char_lstm_input, char_lstm_size,
                    tag_dim, lstm_layers, lstm_size, tagger_mlp_dim,
                    arc_mlp_dim, rel_mlp_dim, max_sentence_length}) {
    if (value <= 0) throw InvalidArgument("encoder sizes must be positive");
  }
  if (dropout < 0.0 || dropout >= 1.0) {
    throw InvalidArgument("dropout must be in [0, 1)");
  }
}

std::string_view HeadKindName(HeadKind kind) {
  return kind == HeadKind::kTagger ? "tagger" : "parser";
}

std::string_view GroupName(GroupId group) {
  switch (group) {
    case kEmbeddingGroup:
      return "embeddings";
    case kCharEncoderGroup:
      return "char_encoder";
    case kBilstmGroup:
      return "bilstm";
    case kHeadGroup:
      return "head";
    case kNumGroups:
      break;
  }
  return "?";
}

int ModelState::WordRow(std::string_view form) const {
  if (has_pretrained()) {
    auto it = embedding_index.find(std::string(form));
    return it == embedding_index.end() ? 0 : it->second;
  }
  return vocabulary.FormId(form);
}

ModelState InitializeModel(const EncoderConfig& config, HeadKind head,
                           Vocabulary vocabulary,
                           const EmbeddingTable* pretrained,
                           std::uint64_t seed) {
  config.Validate();
  if (pretrained && pretrained->dim() != config.word_dim) {
    throw InvalidArgument("pre-trained vectors have width " +
                          std::to_string(pretrained->dim()) +
                          " but word_dim is " + std::to_string(config.word_dim));
  }
  std::mt19937_64 rng(seed);
  ModelState state;
  state.config = config;
  state.head = head;
  state.root_position = head == HeadKind::kParser;
  state.vocabulary = std::move(vocabulary);

  nn::ParameterGroup embeddings{std::string(GroupName(kEmbeddingGroup)), true, {}};
  if (pretrained) {
    Matrix table(pretrained->size() + 1, config.word_dim);
    table.row(0) = pretrained->unknown_vector().transpose();
    for (int i = 0; i < pretrained->size(); ++i) {
      table.row(i + 1) = pretrained->vectors().row(i);
    }
    state.embedding_words.reserve(pretrained->size() + 1);
    state.embedding_words.push_back("<unk>");
    for (const std::string& w : pretrained->words()) state.embedding_words.push_back(w);
    RebuildEmbeddingIndex(state);
    embeddings.Add("word_pretrained", std::move(table), /*fixed=*/true);
  } else {
    const double limit = std::sqrt(3.0 / config.word_dim);
    Matrix table = nn::UniformMatrix(state.vocabulary.form_count(),
                                     config.word_dim, limit, rng);
    table.row(Vocabulary::kPadId).setZero();
    embeddings.Add("word", std::move(table));
  }
  if (config.use_tags) {
    embeddings.Add("tag", nn::UniformMatrix(kTagInputVocabSize, config.tag_dim,
                                            std::sqrt(3.0 / config.tag_dim), rng));
  }
  if (state.root_position) {
    embeddings.Add("root", nn::UniformMatrix(1, config.InputDim(),
                                             std::sqrt(3.0 / config.InputDim()), rng));
  }

  nn::ParameterGroup chars{std::string(GroupName(kCharEncoderGroup)), true, {}};
  chars.Add("embed", nn::UniformMatrix(state.vocabulary.char_count(),
                                       config.char_lstm_input,
                                       std::sqrt(3.0 / config.char_lstm_input), rng));
  AddLstm(chars, "fw", config.char_lstm_input, config.char_lstm_size, rng);
  AddLstm(chars, "bw", config.char_lstm_input, config.char_lstm_size, rng);
  AddAffine(chars, "proj", 2 * config.char_lstm_size, config.char_dim, rng);

  nn::ParameterGroup bilstm{std::string(GroupName(kBilstmGroup)), true, {}};
  for (int layer = 0; layer < config.lstm_layers; ++layer) {
    const int input = layer == 0 ? config.InputDim() : config.OutputDim();
    const std::string prefix = "layer" + std::to_string(layer);
    AddLstm(bilstm, prefix + "_fw", input, config.lstm_size, rng);
    AddLstm(bilstm, prefix + "_bw", input, config.lstm_size, rng);
  }

  nn::ParameterGroup head_group =
      head == HeadKind::kTagger
          ? MakeTaggerHead(config, rng)
          : MakeParserHead(config, state.vocabulary.relation_count(), rng);

  state.groups.push_back(std::move(embeddings));
  state.groups.push_back(std::move(chars));
  state.groups.push_back(std::move(bilstm));
  state.groups.push_back(std::move(head_group));
  return state;
}

void AttachTaggerHead(ModelState& state, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  state.groups[kHeadGroup] = MakeTaggerHead(state.config, rng);
  state.head = HeadKind::kTagger;
}

std::string GroupChecksum(const nn::ParameterGroup& group) {
  Sha256 sha;
  sha.Update(group);
  return sha.HexDigest();
}

std::string FrozenChecksum(const ModelState& state) {
  Sha256 sha;
  for (const nn::ParameterGroup& group : state.groups) {
    if (!group.trainable) sha.Update(group);
  }
  return sha.HexDigest();
}

void SaveCheckpoint(const ModelState& state, std::ostream& out) {
  json meta;
  meta["format_version"] = ModelState::kFormatVersion;
  meta["config"] = ConfigToJson(state.config);
  meta["head"] = HeadKindName(state.head);
  meta["root_position"] = state.root_position;
  meta["withhold_tags"] = state.withhold_tags;
  meta["optimizer_steps"] = state.optimizer_steps;
  meta["tag_scheme"] = state.tag_scheme;
  std::vector<std::uint32_t> chars;
  for (char32_t c : state.vocabulary.CharEntries()) chars.push_back(c);
  meta["vocabulary"] = {{"forms", state.vocabulary.FormEntries()},
                        {"chars", chars},
                        {"relations", state.vocabulary.relations()}};
  meta["embedding_words"] = state.embedding_words;
  json groups = json::array();
  for (const nn::ParameterGroup& group : state.groups) {
    json params = json::array();
    for (const nn::Parameter& p : group.parameters) {
      params.push_back({{"name", p.name},
                        {"rows", p.value.rows()},
                        {"cols", p.value.cols()},
                        {"fixed", p.fixed}});
    }
    groups.push_back(
        {{"name", group.name}, {"trainable", group.trainable}, {"parameters", params}});
  }
  meta["groups"] = groups;

  const std::string text = meta.dump();
  out.write(kMagic, sizeof(kMagic));
  WritePod<std::uint32_t>(out, ModelState::kFormatVersion);
  WritePod<std::uint64_t>(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const nn::ParameterGroup& group : state.groups) {
    for (const nn::Parameter& p : group.parameters) {
      out.write(reinterpret_cast<const char*>(p.value.data()),
                static_cast<std::streamsize>(sizeof(double) * p.value.size()));
    }
  }
  if (!out) throw Error("failed to write checkpoint");
}

ModelState LoadCheckpoint(std::istream& in) {
  char magic[sizeof(kMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ParseError("not a tagprobe checkpoint", 0);
  }
  const auto version = ReadPod<std::uint32_t>(in);
  if (version != ModelState::kFormatVersion) {
    throw ParseError("unsupported checkpoint version " + std::to_string(version), 0);
  }
  const auto length = ReadPod<std::uint64_t>(in);
  std::string text(length, '\0');
  in.read(text.data(), static_cast<std::streamsize>(length));
  if (!in) throw ParseError("truncated checkpoint metadata", 0);
  const json meta = json::parse(text);

  ModelState state;
  state.config = ConfigFromJson(meta.at("config"));
  state.head = meta.at("head") == "parser" ? HeadKind::kParser : HeadKind::kTagger;
  state.root_position = meta.at("root_position");
  state.withhold_tags = meta.at("withhold_tags");
  state.optimizer_steps = meta.at("optimizer_steps");
  state.tag_scheme = meta.at("tag_scheme");
  std::u32string chars;
  for (std::uint32_t c : meta.at("vocabulary").at("chars")) chars.push_back(c);
  state.vocabulary = Vocabulary::FromEntries(
      meta.at("vocabulary").at("forms").get<std::vector<std::string>>(), chars,
      meta.at("vocabulary").at("relations").get<std::vector<std::string>>());
  state.embedding_words = meta.at("embedding_words").get<std::vector<std::string>>();
  RebuildEmbeddingIndex(state);
  for (const json& g : meta.at("groups")) {
    nn::ParameterGroup group{g.at("name"), g.at("trainable"), {}};
    for (const json& p : g.at("parameters")) {
      Matrix value(p.at("rows").get<Eigen::Index>(), p.at("cols").get<Eigen::Index>());
      group.parameters.push_back({p.at("name"), std::move(value), p.at("fixed")});
    }
    state.groups.push_back(std::move(group));
  }
  if (state.groups.size() != kNumGroups) {
    throw ParseError("checkpoint has " + std::to_string(state.groups.size()) +
                         " parameter groups",
                     0);
  }
  for (nn::ParameterGroup& group : state.groups) {
    for (nn::Parameter& p : group.parameters) {
      in.read(reinterpret_cast<char*>(p.value.data()),
              static_cast<std::streamsize>(sizeof(double) * p.value.size()));
      if (!in) throw ParseError("truncated checkpoint tensor " + p.name, 0);
    }
  }
  return state;
}

void SaveCheckpointFile(const ModelState& state, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write checkpoint " + path.string());
  SaveCheckpoint(state, out);
}

ModelState LoadCheckpointFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open checkpoint " + path.string());
  return LoadCheckpoint(in);
}

}  // namespace tagprobe
