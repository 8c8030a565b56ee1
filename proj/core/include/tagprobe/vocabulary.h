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

#ifndef TAGPROBE_VOCABULARY_H_
#define TAGPROBE_VOCABULARY_H_

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tagprobe/conllu.h"

namespace tagprobe {

// Decodes UTF-8 into code points. Invalid bytes decode to U+FFFD.
std::u32string DecodeUtf8(std::string_view text);

// Integer ids for forms, characters and relation labels, assigned in order of
// first occurrence in the training split. Forms and characters reserve id 0
// for padding and id 1 for unknown entries; relations have no reserved ids.
class Vocabulary {
 public:
  static constexpr int kPadId = 0;
  static constexpr int kUnknownId = 1;

  Vocabulary();

  // Throws InvalidArgument on a treebank without tokens.
  static Vocabulary Build(const Treebank& train);
  // Restores a vocabulary from its id-ordered entries (reserved ids excluded).
  static Vocabulary FromEntries(const std::vector<std::string>& forms,
                                const std::u32string& chars,
                                const std::vector<std::string>& relations);

  int FormId(std::string_view form) const;
  int CharId(char32_t c) const;
  // -1 for a label absent from training.
  int RelationId(std::string_view relation) const;
  bool HasForm(std::string_view form) const;

  // Entries in id order, reserved ids excluded.
  std::vector<std::string> FormEntries() const;
  std::u32string CharEntries() const;
  const std::vector<std::string>& relations() const { return relations_; }

  int form_count() const { return static_cast<int>(forms_.size()); }
  int char_count() const { return static_cast<int>(chars_.size()); }
  int relation_count() const { return static_cast<int>(relations_.size()); }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.forms_ == b.forms_ && a.chars_ == b.chars_ &&
           a.relations_ == b.relations_;
  }

 private:
  void AddForm(const std::string& form);
  void AddChar(char32_t c);
  void AddRelation(const std::string& relation);

  std::vector<std::string> forms_;  // includes the two reserved slots
  std::unordered_map<std::string, int> form_ids_;
  std::u32string chars_;
  std::unordered_map<char32_t, int> char_ids_;
  std::vector<std::string> relations_;
  std::unordered_map<std::string, int> relation_ids_;
};

// Per token: true iff its form is not in `vocabulary` (case-sensitive). Pass
// a vocabulary built from another source to use a different OOV reading.
std::vector<std::vector<bool>> OovFlags(const Vocabulary& vocabulary,
                                        const Treebank& treebank);

}  // namespace tagprobe

#endif  // TAGPROBE_VOCABULARY_H_
