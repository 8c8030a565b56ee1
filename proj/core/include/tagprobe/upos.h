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

#ifndef TAGPROBE_UPOS_H_
#define TAGPROBE_UPOS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace tagprobe {

// The 17 Universal Dependencies part-of-speech tags, in UD's alphabetical
// order. The numeric value is the tagger's output class index.
enum class Upos : std::uint8_t {
  kAdj,
  kAdp,
  kAdv,
  kAux,
  kCconj,
  kDet,
  kIntj,
  kNoun,
  kNum,
  kPart,
  kPron,
  kPropn,
  kPunct,
  kSconj,
  kSym,
  kVerb,
  kX,
};

inline constexpr int kNumUpos = 17;

// Literal written to the UPOS column for masked positions.
inline constexpr std::string_view kMaskSymbol = "<MASK>";

std::string_view UposName(Upos tag);
std::optional<Upos> ParseUpos(std::string_view name);
const std::array<Upos, kNumUpos>& AllUpos();

inline int UposIndex(Upos tag) { return static_cast<int>(tag); }
inline Upos UposFromIndex(int index) { return static_cast<Upos>(index); }

// Word-type classes used to cluster tags: open (content words), closed
// (function words) and other (PUNCT, SYM, X).
enum class WordClass : std::uint8_t { kOpen, kClosed, kOther };

inline constexpr int kNumWordClasses = 3;

WordClass ClassOf(Upos tag);
std::string_view WordClassName(WordClass word_class);

// A tag fed to the parser as input. std::nullopt is the MASK symbol.
using TagInput = std::optional<Upos>;
using TagSequence = std::vector<TagInput>;

// Ids in the tag-embedding table: padding, MASK, then one id per UPOS tag.
inline constexpr int kTagPadId = 0;
inline constexpr int kTagMaskId = 1;
inline constexpr int kTagInputVocabSize = kNumUpos + 2;

inline int TagInputId(TagInput tag) {
  return tag ? UposIndex(*tag) + 2 : kTagMaskId;
}

}  // namespace tagprobe

#endif  // TAGPROBE_UPOS_H_
