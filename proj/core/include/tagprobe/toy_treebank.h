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

#ifndef TAGPROBE_TOY_TREEBANK_H_
#define TAGPROBE_TOY_TREEBANK_H_

#include <cstdint>

#include "tagprobe/conllu.h"

namespace tagprobe {

struct ToyTreebankOptions {
  int train_sentences = 500;
  int dev_sentences = 100;
  int test_sentences = 100;
  std::uint64_t seed = 17;
  // Share of sentences built around a noun/verb-ambiguous form whose
  // structure cannot be read off the surface string.
  double ambiguous_rate = 0.35;
  // Probability that the ambiguous form is the verb in such a sentence.
  double ambiguous_verb_probability = 0.6;
};

struct ToyTreebank {
  Treebank train;
  Treebank dev;
  Treebank test;
};

// Sentences from a small fixed grammar over 12 UPOS tags (ADJ ADP ADV AUX
// CCONJ DET NOUN NUM PRON PROPN PUNCT VERB). In "N X N ." sentences the
// middle form is either a verb heading both nouns or a noun compounded into
// the last noun; the two readings share a surface string, so only the gold
// tag tells them apart.
ToyTreebank GenerateToyTreebank(const ToyTreebankOptions& options = {});

}  // namespace tagprobe

#endif  // TAGPROBE_TOY_TREEBANK_H_
