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

#include "tagprobe/vocabulary.h"

#include "tagprobe/errors.h"

namespace tagprobe {

std::u32string DecodeUtf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const auto lead = static_cast<unsigned char>(text[i]);
    int length = 0;
    char32_t code = 0;
    if (lead < 0x80) {
      length = 1;
      code = lead;
    } else if ((lead & 0xE0) == 0xC0) {
      length = 2;
      code = lead & 0x1F;
    } else if ((lead & 0xF0) == 0xE0) {
      length = 3;
      code = lead & 0x0F;
    } else if ((lead & 0xF8) == 0xF0) {
      length = 4;
      code = lead & 0x07;
    }
    // A broken sequence is replaced once, over its longest valid prefix.
    bool valid = length > 0;
    std::size_t consumed = 1;
    for (int k = 1; valid && k < length; ++k) {
      valid = i + k < text.size() && (static_cast<unsigned char>(text[i + k]) & 0xC0) == 0x80;
      if (!valid) break;
      code = (code << 6) | (static_cast<unsigned char>(text[i + k]) & 0x3F);
      ++consumed;
    }
    if (!valid) {
      out.push_back(U'�');
      i += consumed;
      continue;
    }
    out.push_back(code);
    i += length;
  }
  return out;
}

Vocabulary::Vocabulary() : forms_{"<pad>", "<unk>"}, chars_{U'\0', U'\1'} {}

void Vocabulary::AddForm(const std::string& form) {
  if (form_ids_.emplace(form, static_cast<int>(forms_.size())).second) {
    forms_.push_back(form);
  }
}

void Vocabulary::AddChar(char32_t c) {
  if (char_ids_.emplace(c, static_cast<int>(chars_.size())).second) {
    chars_.push_back(c);
  }
}

void Vocabulary::AddRelation(const std::string& relation) {
  if (relation_ids_.emplace(relation, static_cast<int>(relations_.size()))
          .second) {
    relations_.push_back(relation);
  }
}

Vocabulary Vocabulary::Build(const Treebank& train) {
  if (train.TokenCount() == 0) {
    throw InvalidArgument("cannot build a vocabulary from an empty treebank");
  }
  Vocabulary vocabulary;
  for (const Sentence& sentence : train.sentences) {
    for (const Token& token : sentence.tokens) {
      vocabulary.AddForm(token.form);
      for (char32_t c : DecodeUtf8(token.form)) vocabulary.AddChar(c);
      vocabulary.AddRelation(token.deprel);
    }
  }
  return vocabulary;
}

Vocabulary Vocabulary::FromEntries(const std::vector<std::string>& forms,
                                   const std::u32string& chars,
                                   const std::vector<std::string>& relations) {
  Vocabulary vocabulary;
  for (const std::string& form : forms) vocabulary.AddForm(form);
  for (char32_t c : chars) vocabulary.AddChar(c);
  for (const std::string& relation : relations) vocabulary.AddRelation(relation);
  return vocabulary;
}

int Vocabulary::FormId(std::string_view form) const {
  auto it = form_ids_.find(std::string(form));
  return it == form_ids_.end() ? kUnknownId : it->second;
}

int Vocabulary::CharId(char32_t c) const {
  auto it = char_ids_.find(c);
  return it == char_ids_.end() ? kUnknownId : it->second;
}

int Vocabulary::RelationId(std::string_view relation) const {
  auto it = relation_ids_.find(std::string(relation));
  return it == relation_ids_.end() ? -1 : it->second;
}

bool Vocabulary::HasForm(std::string_view form) const {
  return form_ids_.contains(std::string(form));
}

std::vector<std::string> Vocabulary::FormEntries() const {
  return {forms_.begin() + 2, forms_.end()};
}

std::u32string Vocabulary::CharEntries() const { return chars_.substr(2); }

std::vector<std::vector<bool>> OovFlags(const Vocabulary& vocabulary,
                                        const Treebank& treebank) {
  std::vector<std::vector<bool>> flags;
  flags.reserve(treebank.size());
  for (const Sentence& sentence : treebank.sentences) {
    std::vector<bool>& row = flags.emplace_back();
    row.reserve(sentence.size());
    for (const Token& token : sentence.tokens) {
      row.push_back(!vocabulary.HasForm(token.form));
    }
  }
  return flags;
}

}  // namespace tagprobe
