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

#include "tagprobe/toy_treebank.h"

#include <random>
#include <string>
#include <vector>

namespace tagprobe {
namespace {

struct Lexicon {
  std::vector<std::string> det = {"the", "a", "this", "every"};
  std::vector<std::string> adj = {"big", "red", "old", "quiet", "bright", "tiny"};
  std::vector<std::string> noun = {"dog",   "cat",  "farmer", "river", "house", "child",
                                   "bird",  "tree", "letter", "road",  "king",  "horse",
                                   "stone", "boat", "garden", "song"};
  std::vector<std::string> propn = {"Anna", "Oslo", "Milo", "Kira", "Peru"};
  std::vector<std::string> pron = {"she", "he", "they", "we"};
  std::vector<std::string> verb = {"sees",   "finds", "likes", "builds", "carries",
                                   "paints", "sells", "hears", "loves",  "opens"};
  std::vector<std::string> intransitive = {"sleeps", "runs", "sings", "waits", "falls"};
  std::vector<std::string> aux = {"will", "can", "must"};
  std::vector<std::string> adp = {"in", "on", "near", "under"};
  std::vector<std::string> adv = {"slowly", "often", "today", "again"};
  std::vector<std::string> cconj = {"and", "or"};
  std::vector<std::string> num = {"two", "three", "seven"};
  // Forms that are a verb in one reading and a noun in the other.
  std::vector<std::string> ambiguous = {"walk", "watch", "fish", "ring", "plant", "cook"};
};

class SentenceBuilder {
 public:
  int Add(const std::string& form, const char* upos, int head, const char* deprel) {
    Token token;
    token.index = static_cast<int>(sentence_.tokens.size()) + 1;
    token.form = form;
    token.lemma = form;
    token.upos = upos;
    token.head = head;
    token.deprel = deprel;
    sentence_.tokens.push_back(std::move(token));
    return sentence_.tokens.back().index;
  }
  void SetHead(int index, int head) { sentence_.tokens[index - 1].head = head; }
  int next() const { return static_cast<int>(sentence_.tokens.size()) + 1; }
  Sentence Finish(std::string id) {
    sentence_.sent_id = id;
    sentence_.comments = {"# sent_id = " + id};
    return std::move(sentence_);
  }

 private:
  Sentence sentence_;
};

class Generator {
 public:
  Generator(const ToyTreebankOptions& options) : options_(options), rng_(options.seed) {}

  Sentence Next(const std::string& id) {
    SentenceBuilder b;
    if (Chance(options_.ambiguous_rate)) {
      Ambiguous(b);
    } else {
      switch (Pick(4)) {
        case 0:
          Transitive(b);
          break;
        case 1:
          Intransitive(b);
          break;
        case 2:
          Coordinated(b);
          break;
        default:
          AmbiguousInContext(b);
          break;
      }
    }
    return b.Finish(id);
  }

 private:
  bool Chance(double p) { return std::bernoulli_distribution(p)(rng_); }
  int Pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  const std::string& From(const std::vector<std::string>& words) {
    return words[Pick(static_cast<int>(words.size()))];
  }

  // Noun phrase whose head attaches to `head` (fixed up by the caller when
  // the head comes later). Returns the index of the phrase head.
  int NounPhrase(SentenceBuilder& b, const char* deprel, bool allow_pronoun) {
    const int kind = Pick(allow_pronoun ? 5 : 4);
    if (kind == 4) return b.Add(From(lex_.pron), "PRON", -1, deprel);
    if (kind == 3) return b.Add(From(lex_.propn), "PROPN", -1, deprel);
    const int noun = b.next() + (kind == 0 ? 1 : 2);
    if (kind == 2) {
      b.Add(From(lex_.num), "NUM", noun, "nummod");
      b.Add(From(lex_.adj), "ADJ", noun, "amod");
    } else {
      b.Add(From(lex_.det), "DET", noun, "det");
      if (kind == 1) b.Add(From(lex_.adj), "ADJ", noun, "amod");
    }
    return b.Add(From(lex_.noun), "NOUN", -1, deprel);
  }

  void Transitive(SentenceBuilder& b) {
    const int subject = NounPhrase(b, "nsubj", true);
    const int aux = Chance(0.3) ? b.Add(From(lex_.aux), "AUX", -1, "aux") : 0;
    const int verb = b.Add(From(lex_.verb), "VERB", 0, "root");
    b.SetHead(subject, verb);
    if (aux) b.SetHead(aux, verb);
    b.SetHead(NounPhrase(b, "obj", false), verb);
    if (Chance(0.4)) {
      const int noun = b.next() + 2;
      b.Add(From(lex_.adp), "ADP", noun, "case");
      b.Add(From(lex_.det), "DET", noun, "det");
      b.Add(From(lex_.noun), "NOUN", verb, "obl");
    }
    if (Chance(0.3)) b.Add(From(lex_.adv), "ADV", verb, "advmod");
    b.Add(".", "PUNCT", verb, "punct");
  }

  void Intransitive(SentenceBuilder& b) {
    const int subject = NounPhrase(b, "nsubj", true);
    const int verb = b.Add(From(lex_.intransitive), "VERB", 0, "root");
    b.SetHead(subject, verb);
    if (Chance(0.5)) b.Add(From(lex_.adv), "ADV", verb, "advmod");
    b.Add(".", "PUNCT", verb, "punct");
  }

  void Coordinated(SentenceBuilder& b) {
    const int subject = NounPhrase(b, "nsubj", true);
    const int verb = b.Add(From(lex_.intransitive), "VERB", 0, "root");
    b.SetHead(subject, verb);
    const int second = b.next() + 1;
    b.Add(From(lex_.cconj), "CCONJ", second, "cc");
    b.Add(From(lex_.intransitive), "VERB", verb, "conj");
    b.Add(".", "PUNCT", verb, "punct");
  }

  // Ambiguous forms in contexts that settle their reading.
  void AmbiguousInContext(SentenceBuilder& b) {
    if (Chance(0.5)) {
      const int subject = b.Add(From(lex_.pron), "PRON", -1, "nsubj");
      const int verb = b.Add(From(lex_.ambiguous), "VERB", 0, "root");
      b.SetHead(subject, verb);
      b.SetHead(NounPhrase(b, "obj", false), verb);
      b.Add(".", "PUNCT", verb, "punct");
    } else {
      const int subject = NounPhrase(b, "nsubj", true);
      const int verb = b.Add(From(lex_.verb), "VERB", 0, "root");
      b.SetHead(subject, verb);
      const int noun = b.next() + 1;
      b.Add(From(lex_.det), "DET", noun, "det");
      b.Add(From(lex_.ambiguous), "NOUN", verb, "obj");
      b.Add(".", "PUNCT", verb, "punct");
    }
  }

  // "N X N ." with X a verb (N <-nsubj X -obj-> N) or a noun compounded
  // into the final noun.
  void Ambiguous(SentenceBuilder& b) {
    const std::string first = From(lex_.noun);
    const std::string middle = From(lex_.ambiguous);
    const std::string last = From(lex_.noun);
    if (Chance(options_.ambiguous_verb_probability)) {
      b.Add(first, "NOUN", 2, "nsubj");
      b.Add(middle, "VERB", 0, "root");
      b.Add(last, "NOUN", 2, "obj");
      b.Add(".", "PUNCT", 2, "punct");
    } else {
      b.Add(first, "NOUN", 3, "compound");
      b.Add(middle, "NOUN", 3, "compound");
      b.Add(last, "NOUN", 0, "root");
      b.Add(".", "PUNCT", 3, "punct");
    }
  }

  ToyTreebankOptions options_;
  std::mt19937_64 rng_;
  Lexicon lex_;
};

Treebank MakeSplit(Generator& generator, int count, Split split) {
  Treebank treebank;
  treebank.split = split;
  treebank.name = "toy";
  for (int i = 0; i < count; ++i) {
    treebank.sentences.push_back(generator.Next(std::string(SplitName(split)) + "-" +
                                                std::to_string(i + 1)));
  }
  return treebank;
}

}  // namespace

ToyTreebank GenerateToyTreebank(const ToyTreebankOptions& options) {
  Generator generator(options);
  ToyTreebank toy;
  toy.train = MakeSplit(generator, options.train_sentences, Split::kTrain);
  toy.dev = MakeSplit(generator, options.dev_sentences, Split::kDev);
  toy.test = MakeSplit(generator, options.test_sentences, Split::kTest);
  return toy;
}

}  // namespace tagprobe
