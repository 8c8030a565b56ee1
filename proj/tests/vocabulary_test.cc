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

#include <gtest/gtest.h>

#include "tagprobe/errors.h"
#include "tagprobe/vocabulary.h"
#include "test_support.h"

namespace tagprobe {
namespace {

TEST(VocabularyTest, IdsFollowFirstOccurrenceAfterReservedSlots) {
  Vocabulary v = Vocabulary::Build(testing::FiveSentenceFixture());
  EXPECT_EQ(v.FormId("the"), 2);
  EXPECT_EQ(v.FormId("dog"), 3);
  EXPECT_EQ(v.FormId("unseen"), Vocabulary::kUnknownId);
  EXPECT_EQ(v.CharId(U't'), 2);
  EXPECT_EQ(v.CharId(U'Z'), Vocabulary::kUnknownId);
  EXPECT_EQ(v.RelationId("det"), 0);
  EXPECT_EQ(v.RelationId("nsubj"), 1);
  EXPECT_EQ(v.RelationId("nope"), -1);
  EXPECT_TRUE(v.HasForm("Paul"));
  EXPECT_FALSE(v.HasForm("paul"));
}

TEST(VocabularyTest, FromEntriesRestoresEqualVocabulary) {
  Vocabulary v = Vocabulary::Build(testing::FiveSentenceFixture());
  Vocabulary w = Vocabulary::FromEntries(v.FormEntries(), v.CharEntries(), v.relations());
  EXPECT_EQ(v, w);
  EXPECT_EQ(w.form_count(), v.form_count());
}

TEST(VocabularyTest, EmptyTreebankIsRejected) {
  EXPECT_THROW(Vocabulary::Build(Treebank()), InvalidArgument);
}

TEST(VocabularyTest, Utf8DecodingHandlesMultibyteAndInvalidBytes) {
  EXPECT_EQ(DecodeUtf8("aé中😀"), U"aé中😀");
  EXPECT_EQ(DecodeUtf8("a\xff" "b"), std::u32string(U"a�b"));
  EXPECT_EQ(DecodeUtf8("\xe4\xb8"), std::u32string(U"�"));
}

TEST(VocabularyTest, OovFlagsMarkUnseenForms) {
  Vocabulary v = Vocabulary::Build(testing::FiveSentenceFixture());
  Treebank test = ParseConlluString(
      "1\tthe\t_\tDET\t_\t_\t2\tdet\t_\t_\n2\tcow\t_\tNOUN\t_\t_\t0\troot\t_\t_\n\n");
  auto flags = OovFlags(v, test);
  ASSERT_EQ(flags.size(), 1u);
  EXPECT_EQ(flags[0], (std::vector<bool>{false, true}));
}

}  // namespace
}  // namespace tagprobe
