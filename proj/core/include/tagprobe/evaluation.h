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

#ifndef TAGPROBE_EVALUATION_H_
#define TAGPROBE_EVALUATION_H_

#include <cstddef>
#include <string>
#include <vector>

#include "tagprobe/conllu.h"
#include "tagprobe/upos.h"

namespace tagprobe {

struct PredictedArc {
  int head = 0;
  std::string deprel;

  friend bool operator==(const PredictedArc&, const PredictedArc&) = default;
};

using PredictedTree = std::vector<PredictedArc>;

struct ParseScore {
  double uas = 0.0;
  double las = 0.0;
  std::size_t token_count = 0;
  std::size_t correct_heads = 0;
  std::size_t correct_labeled = 0;
};

// Micro-averaged attachment scores over every token, punctuation included.
// Throws InvalidArgument when predicted and gold are not aligned.
ParseScore AttachmentScores(const std::vector<PredictedTree>& predicted,
                            const Treebank& gold);

// Fraction of tokens whose predicted tag equals the gold UPOS.
double TaggingAccuracy(const std::vector<std::vector<Upos>>& predicted,
                       const Treebank& gold);

}  // namespace tagprobe

#endif  // TAGPROBE_EVALUATION_H_
