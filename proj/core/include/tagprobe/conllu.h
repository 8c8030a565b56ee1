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

#ifndef TAGPROBE_CONLLU_H_
#define TAGPROBE_CONLLU_H_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tagprobe/upos.h"

namespace tagprobe {

// One syntactic word (a line with a plain integer ID). Columns that are not
// modelled are kept verbatim so that writing reproduces the input.
struct Token {
  int index = 0;  // 1-based position in the sentence
  std::string form;
  std::string lemma = "_";
  std::string upos;
  std::string xpos = "_";
  std::string feats = "_";
  int head = 0;  // 0 is the artificial root
  std::string deprel;
  std::string deps = "_";
  std::string misc = "_";

  // The UPOS column as a tag, if it names one of the 17 UD tags.
  std::optional<Upos> tag() const { return ParseUpos(upos); }

  friend bool operator==(const Token&, const Token&) = default;
};

struct Sentence {
  std::vector<Token> tokens;
  std::string sent_id;
  std::vector<std::string> comments;  // without the trailing newline
  // Multiword-token ranges and empty nodes, stored as raw lines keyed by the
  // number of tokens that precede them.
  std::vector<std::pair<std::size_t, std::string>> extra_lines;

  std::size_t size() const { return tokens.size(); }

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

enum class Split { kTrain, kDev, kTest };

std::string_view SplitName(Split split);

struct Treebank {
  std::vector<Sentence> sentences;
  Split split = Split::kTrain;
  std::string name;
  // Structural anomalies found while reading (multiple roots, cycles).
  std::vector<std::string> warnings;

  std::size_t size() const { return sentences.size(); }
  std::size_t TokenCount() const;
};

// Reads CoNLL-U text. Throws ParseError naming the line for a wrong column
// count, a non-integer ID or HEAD, a head pointing at its own token or past
// the end of the sentence, or non-contiguous token ids.
Treebank ParseConllu(std::istream& in, Split split = Split::kTrain,
                     std::string name = "");
Treebank ParseConlluString(std::string_view text, Split split = Split::kTrain,
                           std::string name = "");
// `name` defaults to the file stem.
Treebank ReadConlluFile(const std::filesystem::path& path, Split split,
                        std::string name = "");

// Serializes a treebank with LF line endings. When `upos_overrides` is given
// it must hold one sequence per sentence and one entry per token; the entries
// replace column 4, MASK entries being written as kMaskSymbol.
std::string WriteConllu(const Treebank& treebank,
                        std::span<const TagSequence> upos_overrides = {});
void WriteConlluFile(const std::filesystem::path& path,
                     const Treebank& treebank,
                     std::span<const TagSequence> upos_overrides = {});

// Gold UPOS of every token. Throws InvalidArgument if a tag is not one of the
// 17 UD tags.
std::vector<std::vector<Upos>> GoldTags(const Treebank& treebank);

}  // namespace tagprobe

#endif  // TAGPROBE_CONLLU_H_
