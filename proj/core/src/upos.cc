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

#include "tagprobe/upos.h"

namespace tagprobe {
namespace {

constexpr std::array<std::string_view, kNumUpos> kNames = {
    "ADJ",  "ADP",  "ADV",   "AUX",   "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X"};

}  // namespace

std::string_view UposName(Upos tag) { return kNames[UposIndex(tag)]; }

std::optional<Upos> ParseUpos(std::string_view name) {
  for (int i = 0; i < kNumUpos; ++i) {
    if (kNames[i] == name) return UposFromIndex(i);
  }
  return std::nullopt;
}

const std::array<Upos, kNumUpos>& AllUpos() {
  static const std::array<Upos, kNumUpos> all = [] {
    std::array<Upos, kNumUpos> tags{};
    for (int i = 0; i < kNumUpos; ++i) tags[i] = UposFromIndex(i);
    return tags;
  }();
  return all;
}

WordClass ClassOf(Upos tag) {
  switch (tag) {
    case Upos::kAdj:
    case Upos::kAdv:
    case Upos::kIntj:
    case Upos::kNoun:
    case Upos::kPropn:
    case Upos::kVerb:
      return WordClass::kOpen;
    case Upos::kAdp:
    case Upos::kAux:
    case Upos::kCconj:
    case Upos::kDet:
    case Upos::kNum:
    case Upos::kPart:
    case Upos::kPron:
    case Upos::kSconj:
      return WordClass::kClosed;
    case Upos::kPunct:
    case Upos::kSym:
    case Upos::kX:
      return WordClass::kOther;
  }
  return WordClass::kOther;
}

std::string_view WordClassName(WordClass word_class) {
  switch (word_class) {
    case WordClass::kOpen:
      return "open";
    case WordClass::kClosed:
      return "closed";
    case WordClass::kOther:
      return "other";
  }
  return "other";
}

}  // namespace tagprobe
