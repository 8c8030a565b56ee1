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

#include "tagprobe/experiment.h"

#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "sha256.h"
#include "tagprobe/errors.h"

#ifndef TAGPROBE_VERSION
#define TAGPROBE_VERSION "0.0.0"
#endif

namespace tagprobe {
namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

void RejectUnknown(const Json& j, std::string_view where, const std::set<std::string>& known) {
  if (!j.is_object()) throw InvalidArgument(std::string(where) + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) {
      throw InvalidArgument("unknown key '" + key + "' in " + std::string(where));
    }
  }
}

template <typename T>
void Read(const Json& j, const char* key, T& into) {
  if (j.contains(key)) into = j.at(key).get<T>();
}

void ReadEncoder(const Json& j, EncoderConfig& c) {
  RejectUnknown(j, "encoder",
                {"word_dim", "char_dim", "char_lstm_input", "char_lstm_size", "tag_dim",
                 "lstm_layers", "lstm_size", "dropout", "tagger_mlp_dim", "arc_mlp_dim",
                 "rel_mlp_dim", "max_sentence_length"});
  Read(j, "word_dim", c.word_dim);
  Read(j, "char_dim", c.char_dim);
  Read(j, "char_lstm_input", c.char_lstm_input);
  Read(j, "char_lstm_size", c.char_lstm_size);
  Read(j, "tag_dim", c.tag_dim);
  Read(j, "lstm_layers", c.lstm_layers);
  Read(j, "lstm_size", c.lstm_size);
  Read(j, "dropout", c.dropout);
  Read(j, "tagger_mlp_dim", c.tagger_mlp_dim);
  Read(j, "arc_mlp_dim", c.arc_mlp_dim);
  Read(j, "rel_mlp_dim", c.rel_mlp_dim);
  Read(j, "max_sentence_length", c.max_sentence_length);
}

Json EncoderJson(const EncoderConfig& c) {
  return Json{{"word_dim", c.word_dim},
              {"char_dim", c.char_dim},
              {"char_lstm_input", c.char_lstm_input},
              {"char_lstm_size", c.char_lstm_size},
              {"tag_dim", c.tag_dim},
              {"lstm_layers", c.lstm_layers},
              {"lstm_size", c.lstm_size},
              {"dropout", c.dropout},
              {"tagger_mlp_dim", c.tagger_mlp_dim},
              {"arc_mlp_dim", c.arc_mlp_dim},
              {"rel_mlp_dim", c.rel_mlp_dim},
              {"max_sentence_length", c.max_sentence_length}};
}

void ReadTraining(const Json& j, std::string_view where, TrainConfig& c) {
  RejectUnknown(j, where,
                {"learning_rate", "beta1", "beta2", "epsilon", "batch_size", "max_epochs",
                 "patience", "clip_norm", "decoder"});
  Read(j, "learning_rate", c.learning_rate);
  Read(j, "beta1", c.beta1);
  Read(j, "beta2", c.beta2);
  Read(j, "epsilon", c.epsilon);
  Read(j, "batch_size", c.batch_size);
  Read(j, "max_epochs", c.max_epochs);
  Read(j, "patience", c.patience);
  Read(j, "clip_norm", c.clip_norm);
  if (j.contains("decoder")) c.decoder = ParseDecoderKind(j.at("decoder").get<std::string>());
}

Json TrainingJson(const TrainConfig& c) {
  return Json{{"learning_rate", c.learning_rate},
              {"beta1", c.beta1},
              {"beta2", c.beta2},
              {"epsilon", c.epsilon},
              {"batch_size", c.batch_size},
              {"max_epochs", c.max_epochs},
              {"patience", c.patience},
              {"clip_norm", c.clip_norm},
              {"decoder", c.decoder == DecoderKind::kGreedy ? "greedy" : "cle"}};
}

fs::path Resolve(const fs::path& base, const std::string& value) {
  fs::path p(value);
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return base / p;
}

void RequireFile(const fs::path& path, const std::string& what) {
  if (path.empty()) throw InvalidArgument(what + " path is missing");
  if (!fs::is_regular_file(path)) {
    throw InvalidArgument(what + " file not found: " + path.string());
  }
}

}  // namespace

std::string_view Version() { return TAGPROBE_VERSION; }

void ExperimentConfig::Validate(bool need_dev, bool need_test) const {
  if (treebanks.empty()) throw InvalidArgument("no treebank given (use --train or a config)");
  std::set<std::string> names;
  for (const TreebankPaths& t : treebanks) {
    if (t.name.empty()) throw InvalidArgument("treebank without a name");
    if (!names.insert(t.name).second) throw InvalidArgument("duplicate treebank " + t.name);
    RequireFile(t.train, t.name + " train");
    if (need_dev) RequireFile(t.dev, t.name + " dev");
    if (need_test) RequireFile(t.test, t.name + " test");
  }
  if (embeddings) RequireFile(*embeddings, "embeddings");
  if (seeds.empty()) throw InvalidArgument("the seed list is empty");
  if (schemes.empty()) throw InvalidArgument("the scheme list is empty");
  if (jobs < 1) throw InvalidArgument("--jobs must be at least 1");
  encoder.Validate();
  tagger_train.Validate();
  parser_train.Validate();
}

ExperimentConfig ParseExperimentConfig(std::string_view text, const fs::path& base_dir) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
  }
  if (j.is_object() && j.contains("config") && j.contains("config_sha256")) {
    j = j.at("config");  // a manifest
  }
  RejectUnknown(j, "config",
                {"treebanks", "embeddings", "encoder", "training", "tagger_training",
                 "parser_training", "seeds", "schemes", "out", "jobs", "kind", "svg"});
  ExperimentConfig c;
  try {
    if (j.contains("treebanks")) {
      for (const Json& t : j.at("treebanks")) {
        RejectUnknown(t, "treebank entry", {"name", "train", "dev", "test"});
        TreebankPaths paths;
        paths.train = Resolve(base_dir, t.at("train").get<std::string>());
        paths.name = t.value("name", paths.train.stem().string());
        paths.dev = Resolve(base_dir, t.value("dev", ""));
        paths.test = Resolve(base_dir, t.value("test", ""));
        c.treebanks.push_back(paths);
      }
    }
    if (j.contains("embeddings") && !j.at("embeddings").is_null()) {
      c.embeddings = Resolve(base_dir, j.at("embeddings").get<std::string>());
    }
    if (j.contains("encoder")) ReadEncoder(j.at("encoder"), c.encoder);
    if (j.contains("training")) {
      ReadTraining(j.at("training"), "training", c.tagger_train);
      ReadTraining(j.at("training"), "training", c.parser_train);
    }
    if (j.contains("tagger_training")) {
      ReadTraining(j.at("tagger_training"), "tagger_training", c.tagger_train);
    }
    if (j.contains("parser_training")) {
      ReadTraining(j.at("parser_training"), "parser_training", c.parser_train);
    }
    Read(j, "seeds", c.seeds);
    if (j.contains("schemes")) {
      c.schemes.clear();
      for (const Json& s : j.at("schemes")) {
        std::optional<SchemeKind> kind = ParseScheme(s.get<std::string>());
        if (!kind) throw InvalidArgument("unknown scheme '" + s.get<std::string>() + "'");
        c.schemes.push_back(*kind);
      }
    }
    if (j.contains("out")) c.out = Resolve(base_dir, j.at("out").get<std::string>());
    Read(j, "jobs", c.jobs);
    Read(j, "svg", c.svg);
    if (j.contains("kind")) {
      const std::string kind = j.at("kind").get<std::string>();
      if (kind == "tagger") {
        c.kind = HeadKind::kTagger;
      } else if (kind == "parser") {
        c.kind = HeadKind::kParser;
      } else {
        throw InvalidArgument("kind must be tagger or parser, got '" + kind + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad config value: ") + e.what());
  }
  return c;
}

ExperimentConfig LoadExperimentConfig(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return ParseExperimentConfig(text.str(), path.parent_path());
}

std::string ExperimentConfigJson(const ExperimentConfig& c) {
  Json treebanks = Json::array();
  for (const TreebankPaths& t : c.treebanks) {
    treebanks.push_back(Json{{"name", t.name},
                             {"train", t.train.string()},
                             {"dev", t.dev.string()},
                             {"test", t.test.string()}});
  }
  Json schemes = Json::array();
  for (SchemeKind s : c.schemes) schemes.push_back(SchemeName(s));
  Json j{{"treebanks", treebanks},
         {"embeddings", c.embeddings ? Json(c.embeddings->string()) : Json(nullptr)},
         {"encoder", EncoderJson(c.encoder)},
         {"tagger_training", TrainingJson(c.tagger_train)},
         {"parser_training", TrainingJson(c.parser_train)},
         {"seeds", c.seeds},
         {"schemes", schemes},
         {"out", c.out.string()},
         {"jobs", c.jobs},
         {"kind", HeadKindName(c.kind)},
         {"svg", c.svg}};
  return j.dump(2) + "\n";
}

std::string ConfigDigest(const ExperimentConfig& config) {
  return Sha256Hex(ExperimentConfigJson(config));
}

ExperimentConfig ToyExperimentConfig() {
  ExperimentConfig c;
  c.encoder.word_dim = 32;
  c.encoder.char_dim = 16;
  c.encoder.char_lstm_input = 16;
  c.encoder.char_lstm_size = 16;
  c.encoder.tag_dim = 16;
  c.encoder.lstm_layers = 2;
  c.encoder.lstm_size = 48;
  c.encoder.tagger_mlp_dim = 32;
  c.encoder.arc_mlp_dim = 32;
  c.encoder.rel_mlp_dim = 16;
  for (TrainConfig* t : {&c.tagger_train, &c.parser_train}) {
    t->max_epochs = 40;
    t->patience = 10;
  }
  c.seeds = {1, 2, 3};
  return c;
}

TreebankSplits ReadTreebank(const TreebankPaths& paths) {
  TreebankSplits splits;
  splits.name = paths.name;
  splits.train = ReadConlluFile(paths.train, Split::kTrain, paths.name);
  if (!paths.dev.empty()) splits.dev = ReadConlluFile(paths.dev, Split::kDev, paths.name);
  if (!paths.test.empty()) splits.test = ReadConlluFile(paths.test, Split::kTest, paths.name);
  splits.dev.split = Split::kDev;
  splits.test.split = Split::kTest;
  return splits;
}

std::optional<EmbeddingTable> LoadEmbeddingsFor(const ExperimentConfig& config,
                                                const TreebankSplits& splits) {
  if (!config.embeddings) return std::nullopt;
  std::unordered_set<std::string> forms;
  for (const Treebank* t : {&splits.train, &splits.dev, &splits.test}) {
    for (const Sentence& s : t->sentences) {
      for (const Token& token : s.tokens) forms.insert(token.form);
    }
  }
  EmbeddingTable table = LoadVectorsFile(*config.embeddings, &forms);
  spdlog::info("loaded {} vectors of width {} from {}", table.size(), table.dim(),
               config.embeddings->string());
  if (table.dim() < config.encoder.word_dim) {
    throw InvalidArgument("embeddings have width " + std::to_string(table.dim()) +
                          ", narrower than word_dim " + std::to_string(config.encoder.word_dim));
  }
  if (table.dim() > config.encoder.word_dim) {
    table = PcaCompress(table, config.encoder.word_dim);
  }
  return table;
}

void PrepareOutputDirectory(const fs::path& out) {
  for (const char* sub : {"checkpoints", "reports", "tables", "figures"}) {
    fs::create_directories(out / sub);
  }
}

void WriteManifest(const fs::path& out, std::string_view command,
                   const ExperimentConfig& config, const std::vector<fs::path>& outputs) {
  Json files = Json::array();
  for (const fs::path& p : outputs) {
    files.push_back((p.is_absolute() ? p.lexically_relative(fs::absolute(out)) : p).generic_string());
  }
  Json j{{"tool", "tagprobe"},
         {"version", Version()},
         {"command", command},
         {"config_sha256", ConfigDigest(config)},
         {"seeds", config.seeds},
         {"config", Json::parse(ExperimentConfigJson(config))},
         {"outputs", files}};
  WriteTextFile(out / "manifest.json", j.dump(2) + "\n");
}

void WriteTextFile(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace tagprobe
