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

#include "tagprobe/error_set.h"

#include <algorithm>
#include <string>

#include "tagprobe/errors.h"

namespace tagprobe {
namespace {

bool PositionLess(const ErrorRecord& a, const ErrorRecord& b) {
  return a.sentence_index != b.sentence_index ? a.sentence_index < b.sentence_index
                                              : a.token_index < b.token_index;
}

}  // namespace

ErrorSet::ErrorSet(std::vector<ErrorRecord> records) : records_(std::move(records)) {
  std::sort(records_.begin(), records_.end(), PositionLess);
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (records_[i].gold == records_[i].predicted) {
      throw InvalidArgument("error record with gold == predicted");
    }
    if (i > 0 && !PositionLess(records_[i - 1], records_[i])) {
      throw InvalidArgument("two error records at the same position");
    }
  }
}

bool ErrorSet::Contains(int sentence_index, int token_index) const {
  ErrorRecord probe{sentence_index, token_index, Upos::kX, Upos::kX};
  return std::binary_search(records_.begin(), records_.end(), probe, PositionLess);
}

void ErrorSet::CheckRange(const Treebank& treebank) const {
  for (const ErrorRecord& r : records_) {
    if (r.sentence_index < 0 ||
        r.sentence_index >= static_cast<int>(treebank.size()) || r.token_index < 1 ||
        r.token_index > static_cast<int>(treebank.sentences[r.sentence_index].size())) {
      throw InvalidArgument("error position (" + std::to_string(r.sentence_index) +
                            ", " + std::to_string(r.token_index) +
                            ") is outside the treebank");
    }
  }
}

ErrorSet CollectErrors(const std::vector<std::vector<Upos>>& predicted,
                       const Treebank& gold) {
  const std::vector<std::vector<Upos>> gold_tags = GoldTags(gold);
  if (predicted.size() != gold_tags.size()) {
    throw InvalidArgument("predicted tags cover " + std::to_string(predicted.size()) +
                          " sentences, gold has " + std::to_string(gold_tags.size()));
  }
  std::vector<ErrorRecord> records;
  for (std::size_t s = 0; s < gold_tags.size(); ++s) {
    if (predicted[s].size() != gold_tags[s].size()) {
      throw InvalidArgument("predicted tags for sentence " + std::to_string(s) +
                            " have the wrong length");
    }
    for (std::size_t t = 0; t < gold_tags[s].size(); ++t) {
      if (predicted[s][t] != gold_tags[s][t]) {
        records.push_back({static_cast<int>(s), static_cast<int>(t) + 1,
                           gold_tags[s][t], predicted[s][t]});
      }
    }
  }
  return ErrorSet(std::move(records));
}

}  // namespace tagprobe
