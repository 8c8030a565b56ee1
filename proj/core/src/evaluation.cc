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

#include "tagprobe/evaluation.h"

#include "tagprobe/errors.h"

namespace tagprobe {

ParseScore AttachmentScores(const std::vector<PredictedTree>& predicted,
                            const Treebank& gold) {
  if (predicted.size() != gold.size()) {
    throw InvalidArgument("predicted trees cover " + std::to_string(predicted.size()) +
                          " sentences, gold has " + std::to_string(gold.size()));
  }
  ParseScore score;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    const Sentence& sentence = gold.sentences[s];
    if (predicted[s].size() != sentence.size()) {
      throw InvalidArgument("predicted tree for sentence " + std::to_string(s) +
                            " has " + std::to_string(predicted[s].size()) +
                            " tokens, gold has " + std::to_string(sentence.size()));
    }
    for (std::size_t t = 0; t < sentence.size(); ++t) {
      const bool head_ok = predicted[s][t].head == sentence.tokens[t].head;
      score.correct_heads += head_ok;
      score.correct_labeled += head_ok && predicted[s][t].deprel == sentence.tokens[t].deprel;
    }
    score.token_count += sentence.size();
  }
  if (score.token_count > 0) {
    score.uas = static_cast<double>(score.correct_heads) / score.token_count;
    score.las = static_cast<double>(score.correct_labeled) / score.token_count;
  }
  return score;
}

double TaggingAccuracy(const std::vector<std::vector<Upos>>& predicted,
                       const Treebank& gold) {
  const std::vector<std::vector<Upos>> gold_tags = GoldTags(gold);
  if (predicted.size() != gold_tags.size()) {
    throw InvalidArgument("predicted tags cover " + std::to_string(predicted.size()) +
                          " sentences, gold has " + std::to_string(gold_tags.size()));
  }
  std::size_t correct = 0;
  std::size_t total = 0;
  for (std::size_t s = 0; s < gold_tags.size(); ++s) {
    if (predicted[s].size() != gold_tags[s].size()) {
      throw InvalidArgument("predicted tags for sentence " + std::to_string(s) +
                            " have the wrong length");
    }
    for (std::size_t t = 0; t < gold_tags[s].size(); ++t) {
      correct += predicted[s][t] == gold_tags[s][t];
    }
    total += gold_tags[s].size();
  }
  return total == 0 ? 0.0 : static_cast<double>(correct) / total;
}

}  // namespace tagprobe
