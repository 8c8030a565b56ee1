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

#ifndef TAGPROBE_DECODER_H_
#define TAGPROBE_DECODER_H_

#include <string_view>
#include <vector>

#include "tagprobe/network.h"

namespace tagprobe {

struct Arc {
  int head = 0;      // 0 is ROOT
  int relation = 0;  // relation id in the model's vocabulary
};

enum class DecoderKind { kChuLiuEdmonds, kGreedy };

DecoderKind ParseDecoderKind(std::string_view name);

// Maximum-score spanning arborescence rooted at node 0 (Chu-Liu/Edmonds).
// `scores` is n x (n + 1): scores(i - 1, h) is the score of head h for token
// i. Returns heads for tokens 1..n. Self-loops are never chosen; among equal
// candidates the lower head index wins.
std::vector<int> MaxSpanningArborescence(const nn::Matrix& scores);

// Highest-scoring head per token, independently; may contain cycles.
std::vector<int> GreedyHeads(const nn::Matrix& scores);

// Heads from the chosen decoder, each labelled with the most probable
// relation for that arc.
std::vector<Arc> DecodeTree(const ScoredParse& parse,
                            DecoderKind kind = DecoderKind::kChuLiuEdmonds);

// Sum of scores(i - 1, heads[i - 1]) over tokens, in token order.
double TreeScore(const nn::Matrix& scores, const std::vector<int>& heads);

// True iff `heads` (tokens 1..n) forms a tree rooted at 0.
bool IsSpanningArborescence(const std::vector<int>& heads);

}  // namespace tagprobe

#endif  // TAGPROBE_DECODER_H_
