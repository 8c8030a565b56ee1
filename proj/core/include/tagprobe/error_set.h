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

#ifndef TAGPROBE_ERROR_SET_H_
#define TAGPROBE_ERROR_SET_H_

#include <cstddef>
#include <vector>

#include "tagprobe/conllu.h"
#include "tagprobe/upos.h"

namespace tagprobe {

// A token whose predicted tag differs from its gold tag.
struct ErrorRecord {
  int sentence_index = 0;  // 0-based
  int token_index = 1;     // 1-based
  Upos gold = Upos::kX;
  Upos predicted = Upos::kX;

  friend bool operator==(const ErrorRecord&, const ErrorRecord&) = default;
};

// Tagging errors over one treebank, ordered by position. Two errors are the
// same occurrence when they sit on the same (sentence, token) position.
class ErrorSet {
 public:
  ErrorSet() = default;
  // Throws InvalidArgument on a record with gold == predicted or on two
  // records at the same position.
  explicit ErrorSet(std::vector<ErrorRecord> records);

  bool Contains(int sentence_index, int token_index) const;
  const std::vector<ErrorRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  // Throws InvalidArgument if a record points outside `treebank`.
  void CheckRange(const Treebank& treebank) const;

  friend bool operator==(const ErrorSet&, const ErrorSet&) = default;

 private:
  std::vector<ErrorRecord> records_;
};

// Errors of `predicted` against the gold UPOS of `gold`.
ErrorSet CollectErrors(const std::vector<std::vector<Upos>>& predicted,
                       const Treebank& gold);

}  // namespace tagprobe

#endif  // TAGPROBE_ERROR_SET_H_
