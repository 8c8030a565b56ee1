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

#include <random>

#include <gtest/gtest.h>

#include "oracles.h"
#include "tagprobe/errors.h"
#include "tagprobe/tag_masking.h"
#include "test_support.h"

namespace tagprobe {
namespace {

// The definitional table, written out independently of the library.
TagInput Expected(SchemeKind scheme, Upos gold, Upos predicted, bool tagger_error,
                  bool probe_error) {
  switch (scheme) {
    case SchemeKind::kPred: return predicted;
    case SchemeKind::kMaskAllButTaggerErrors: return tagger_error ? TagInput(gold) : std::nullopt;
    case SchemeKind::kMaskAllButProbeErrors: return probe_error ? TagInput(gold) : std::nullopt;
    case SchemeKind::kMaskTaggerErrors: return tagger_error ? std::nullopt : TagInput(predicted);
    case SchemeKind::kGold: return gold;
    default: return std::nullopt;
  }
}

TEST(TagSchemeTest, NamesRoundTrip) {
  EXPECT_EQ(AllSchemes().size(), static_cast<std::size_t>(kNumSchemes));
  for (SchemeKind s : AllSchemes()) {
    EXPECT_EQ(ParseScheme(SchemeName(s)), s);
    EXPECT_EQ(ParseScheme(SchemeLabel(s)), s);
  }
  EXPECT_EQ(ParseScheme("MASK-TAGGER-ERRORS"), SchemeKind::kMaskTaggerErrors);
  EXPECT_EQ(ParseScheme("bogus"), std::nullopt);
}

TEST(TagSchemeTest, ConditionTokenFollowsTable) {
  for (SchemeKind s : AllSchemes()) {
    if (s == SchemeKind::kNone) continue;
    for (bool te : {false, true}) {
      for (bool pe : {false, true}) {
        TokenEvidence ev{Upos::kNoun, te ? Upos::kVerb : Upos::kNoun, te, pe};
        EXPECT_EQ(ConditionToken(s, ev), Expected(s, Upos::kNoun, *ev.predicted, te, pe));
      }
    }
  }
  EXPECT_THROW(ConditionToken(SchemeKind::kNone, {}), InvalidArgument);
  EXPECT_THROW(ConditionToken(SchemeKind::kPred, {}), InvalidArgument);
}

TEST(TagConditioningTest, ErrorsAtTwoAndFive) {
  Treebank gold = ParseConlluString(
      "1\ta\t_\tDET\t_\t_\t2\tdet\t_\t_\n2\tb\t_\tNOUN\t_\t_\t3\tnsubj\t_\t_\n"
      "3\tc\t_\tVERB\t_\t_\t0\troot\t_\t_\n4\td\t_\tADP\t_\t_\t5\tcase\t_\t_\n"
      "5\te\t_\tNOUN\t_\t_\t3\tobl\t_\t_\n6\t.\t_\tPUNCT\t_\t_\t3\tpunct\t_\t_\n\n");
  std::vector<std::vector<Upos>> pred = {
      {Upos::kDet, Upos::kVerb, Upos::kVerb, Upos::kAdp, Upos::kAdj, Upos::kPunct}};
  ErrorSet errors = CollectErrors(pred, gold);
  ASSERT_EQ(errors.size(), 2u);

  TagSequence mnet =
      BuildConditioning(SchemeKind::kMaskAllButTaggerErrors, gold, &pred, &errors).tags->at(0);
  EXPECT_EQ(mnet, (TagSequence{std::nullopt, Upos::kNoun, std::nullopt, std::nullopt,
                               Upos::kNoun, std::nullopt}));
  TagSequence maet = BuildConditioning(SchemeKind::kMaskTaggerErrors, gold, &pred, &errors).tags->at(0);
  EXPECT_EQ(maet, (TagSequence{Upos::kDet, std::nullopt, Upos::kVerb, Upos::kAdp, std::nullopt,
                               Upos::kPunct}));
  // Without an explicit error set the errors are derived from predictions.
  EXPECT_EQ(BuildConditioning(SchemeKind::kMaskTaggerErrors, gold, &pred).tags->at(0), maet);
  EXPECT_FALSE(BuildConditioning(SchemeKind::kNone, gold).tags.has_value());
}

TEST(TagConditioningTest, MissingInputsAreRejected) {
  Treebank gold = testing::FiveSentenceFixture();
  EXPECT_THROW(BuildConditioning(SchemeKind::kPred, gold), InvalidArgument);
  EXPECT_THROW(BuildConditioning(SchemeKind::kMaskAllButProbeErrors, gold), InvalidArgument);
  ErrorSet outside({{9, 1, Upos::kNoun, Upos::kVerb}});
  EXPECT_THROW(BuildConditioning(SchemeKind::kMaskAllButTaggerErrors, gold, nullptr, &outside),
               InvalidArgument);
  SplitEvidence evidence;
  evidence.predicted = GoldTags(gold);
  EXPECT_THROW(ConditioningFor(SchemeKind::kMaskAllButProbeErrors, gold, evidence),
               InvalidArgument);
}

TEST(TagConditioningTest, RandomFixturesMatchDefinition) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    Treebank gold = testing::RandomTreebank(rng, 3, 8);
    auto pred = testing::RandomPredictions(rng, gold, 0.3);
    ErrorSet tagger = CollectErrors(pred, gold);
    ErrorSet probe = CollectErrors(testing::RandomPredictions(rng, gold, 0.4), gold);
    auto gold_tags = GoldTags(gold);
    for (SchemeKind scheme : AllSchemes()) {
      if (scheme == SchemeKind::kNone) continue;
      const ErrorSet* errors = scheme == SchemeKind::kMaskAllButProbeErrors ? &probe : &tagger;
      TagInputs tags = *BuildConditioning(scheme, gold, &pred, errors).tags;
      EXPECT_EQ(*BuildConditioning(scheme, gold, &pred, errors).tags, tags);  // idempotent
      for (std::size_t s = 0; s < gold.size(); ++s) {
        bool clean = true;
        for (std::size_t i = 0; i < gold.sentences[s].size(); ++i) {
          const int t = static_cast<int>(i) + 1;
          clean = clean && !tagger.Contains(static_cast<int>(s), t);
          EXPECT_EQ(tags[s][i], Expected(scheme, gold_tags[s][i], pred[s][i],
                                         tagger.Contains(static_cast<int>(s), t),
                                         probe.Contains(static_cast<int>(s), t)));
        }
        if (clean && scheme == SchemeKind::kMaskTaggerErrors) {
          TagSequence as_pred(pred[s].begin(), pred[s].end());
          EXPECT_EQ(tags[s], as_pred);
        }
      }
    }
  }
}

TEST(TagConditioningTest, ZeroAndAllErrorSentences) {
  Treebank gold = ParseConlluString(
      "1\ta\t_\tDET\t_\t_\t2\tdet\t_\t_\n2\tb\t_\tNOUN\t_\t_\t0\troot\t_\t_\n\n"
      "1\tc\t_\tPRON\t_\t_\t2\tnsubj\t_\t_\n2\td\t_\tVERB\t_\t_\t0\troot\t_\t_\n\n");
  std::vector<std::vector<Upos>> pred = {{Upos::kNoun, Upos::kVerb}, {Upos::kPron, Upos::kVerb}};
  ErrorSet errors = CollectErrors(pred, gold);
  TagInputs mnet =
      *BuildConditioning(SchemeKind::kMaskAllButTaggerErrors, gold, &pred, &errors).tags;
  TagInputs maet = *BuildConditioning(SchemeKind::kMaskTaggerErrors, gold, &pred).tags;
  // Every token wrong: gold everywhere under one scheme, masks under the other.
  EXPECT_EQ(mnet[0], (TagSequence{Upos::kDet, Upos::kNoun}));
  EXPECT_EQ(maet[0], (TagSequence{std::nullopt, std::nullopt}));
  // No token wrong: all masks under one scheme, predictions under the other.
  EXPECT_EQ(mnet[1], (TagSequence{std::nullopt, std::nullopt}));
  EXPECT_EQ(maet[1], (TagSequence{Upos::kPron, Upos::kVerb}));
}

TEST(MaskingResultTest, CsvShapes) {
  MaskingResult result;
  for (SchemeKind s : {SchemeKind::kNone, SchemeKind::kGold}) {
    for (std::uint64_t seed : {1, 2}) {
      SchemeRun run;
      run.treebank = "toy";
      run.scheme = s;
      run.seed = seed;
      run.test.las = s == SchemeKind::kGold ? 0.9 : 0.5 + 0.1 * seed;
      run.test.uas = 1.0;
      result.runs.push_back(run);
    }
  }
  const std::vector<SchemeKind> schemes = {SchemeKind::kNone, SchemeKind::kGold};
  EXPECT_EQ(LasBySchemeCsv(result, schemes),
            "scheme,label,las,uas,runs\nnone,None,65.00,100.00,2\ngold,Gold,90.00,100.00,2\n");
  EXPECT_EQ(LasTableCsv(result, schemes), "treebank,None,Gold\ntoy,65.00,90.00\navg,65.00,90.00\n");
  EXPECT_DOUBLE_EQ(result.MeanLas(SchemeKind::kNone), 0.65);
}

}  // namespace
}  // namespace tagprobe
