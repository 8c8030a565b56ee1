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

#ifndef TAGPROBE_TESTS_TEST_SUPPORT_H_
#define TAGPROBE_TESTS_TEST_SUPPORT_H_

#include <filesystem>
#include <string>

#include "tagprobe/conllu.h"
#include "tagprobe/model.h"

namespace tagprobe::testing {

std::filesystem::path TestDataPath(const std::string& relative);

// A small encoder so that unit tests train in seconds.
EncoderConfig TinyEncoder(bool use_tags = false);

// Five short sentences with varied structure, used for overfitting checks.
Treebank FiveSentenceFixture();

}  // namespace tagprobe::testing

#endif  // TAGPROBE_TESTS_TEST_SUPPORT_H_
