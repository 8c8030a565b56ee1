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

#include "tagprobe/conllu.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "tagprobe/errors.h"

namespace tagprobe {
namespace {

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

std::optional<int> ParseInt(std::string_view text) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

bool IsRangeOrEmptyNode(std::string_view id) {
  return id.find('-') != std::string_view::npos ||
         id.find('.') != std::string_view::npos;
}

// Reports multiple roots and cycles; both are tolerated in the data.
void CheckTree(const Sentence& sentence, int first_line, Treebank& treebank) {
  int roots = 0;
  for (const Token& token : sentence.tokens) roots += token.head == 0;
  const std::string where =
      sentence.sent_id.empty()
          ? "sentence starting at line " + std::to_string(first_line)
          : "sentence " + sentence.sent_id;
  if (roots != 1) {
    treebank.warnings.push_back(where + " has " + std::to_string(roots) +
                                " root tokens");
  }
  const int n = static_cast<int>(sentence.size());
  for (int start = 1; start <= n; ++start) {
    int node = start;
    for (int steps = 0; steps <= n && node != 0; ++steps) {
      node = sentence.tokens[node - 1].head;
      if (node == start) {
        treebank.warnings.push_back(where + " has a cycle through token " +
                                    std::to_string(start));
        return;
      }
    }
  }
}

}  // namespace

std::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kDev:
      return "dev";
    case Split::kTest:
      return "test";
  }
  return "train";
}

std::size_t Treebank::TokenCount() const {
  std::size_t count = 0;
  for (const Sentence& sentence : sentences) count += sentence.size();
  return count;
}

Treebank ParseConllu(std::istream& in, Split split, std::string name) {
  Treebank treebank;
  treebank.split = split;
  treebank.name = std::move(name);

  Sentence current;
  bool open = false;
  int first_line = 0;
  int line_number = 0;

  auto finish = [&]() {
    if (!open) return;
    const int n = static_cast<int>(current.size());
    for (const Token& token : current.tokens) {
      if (token.head > n) {
        throw ParseError("head " + std::to_string(token.head) +
                             " exceeds sentence length " + std::to_string(n),
                         first_line);
      }
    }
    if (!current.tokens.empty()) CheckTree(current, first_line, treebank);
    treebank.sentences.push_back(std::move(current));
    current = Sentence();
    open = false;
  };

  std::string line;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      finish();
      continue;
    }
    if (!open) {
      open = true;
      first_line = line_number;
    }
    if (line.front() == '#') {
      static constexpr std::string_view kSentId = "# sent_id = ";
      if (line.starts_with(kSentId)) current.sent_id = line.substr(kSentId.size());
      current.comments.push_back(line);
      continue;
    }
    const std::vector<std::string_view> fields = SplitTabs(line);
    if (fields.size() != 10) {
      throw ParseError("expected 10 tab-separated columns, found " +
                           std::to_string(fields.size()),
                       line_number);
    }
    if (IsRangeOrEmptyNode(fields[0])) {
      current.extra_lines.emplace_back(current.size(), line);
      continue;
    }
    const std::optional<int> id = ParseInt(fields[0]);
    if (!id) {
      throw ParseError("non-integer ID '" + std::string(fields[0]) + "'",
                       line_number);
    }
    if (*id != static_cast<int>(current.size()) + 1) {
      throw ParseError("token ID " + std::to_string(*id) + " is not contiguous",
                       line_number);
    }
    const std::optional<int> head = ParseInt(fields[6]);
    if (!head || *head < 0) {
      throw ParseError("non-integer HEAD '" + std::string(fields[6]) + "'",
                       line_number);
    }
    if (*head == *id) {
      throw ParseError("token " + std::to_string(*id) + " is its own head",
                       line_number);
    }
    Token token;
    token.index = *id;
    token.form = fields[1];
    token.lemma = fields[2];
    token.upos = fields[3];
    token.xpos = fields[4];
    token.feats = fields[5];
    token.head = *head;
    token.deprel = fields[7];
    token.deps = fields[8];
    token.misc = fields[9];
    current.tokens.push_back(std::move(token));
  }
  finish();

  for (const std::string& warning : treebank.warnings) {
    spdlog::warn("{}: {}", treebank.name.empty() ? "treebank" : treebank.name,
                 warning);
  }
  return treebank;
}

Treebank ParseConlluString(std::string_view text, Split split,
                           std::string name) {
  std::istringstream in{std::string(text)};
  return ParseConllu(in, split, std::move(name));
}

Treebank ReadConlluFile(const std::filesystem::path& path, Split split,
                        std::string name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open treebank " + path.string());
  if (name.empty()) name = path.stem().string();
  try {
    return ParseConllu(in, split, std::move(name));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

std::string WriteConllu(const Treebank& treebank,
                        std::span<const TagSequence> upos_overrides) {
  if (!upos_overrides.empty() &&
      upos_overrides.size() != treebank.sentences.size()) {
    throw InvalidArgument("UPOS overrides cover " +
                          std::to_string(upos_overrides.size()) +
                          " sentences, treebank has " +
                          std::to_string(treebank.sentences.size()));
  }
  std::string out;
  for (std::size_t s = 0; s < treebank.sentences.size(); ++s) {
    const Sentence& sentence = treebank.sentences[s];
    const TagSequence* overrides =
        upos_overrides.empty() ? nullptr : &upos_overrides[s];
    if (overrides && overrides->size() != sentence.size()) {
      throw InvalidArgument("UPOS overrides for sentence " + std::to_string(s) +
                            " have " + std::to_string(overrides->size()) +
                            " entries, sentence has " +
                            std::to_string(sentence.size()));
    }
    for (const std::string& comment : sentence.comments) {
      out += comment;
      out += '\n';
    }
    std::size_t extra = 0;
    for (std::size_t t = 0; t <= sentence.size(); ++t) {
      while (extra < sentence.extra_lines.size() &&
             sentence.extra_lines[extra].first == t) {
        out += sentence.extra_lines[extra].second;
        out += '\n';
        ++extra;
      }
      if (t == sentence.size()) break;
      const Token& token = sentence.tokens[t];
      std::string_view upos = token.upos;
      if (overrides) {
        const TagInput& tag = (*overrides)[t];
        upos = tag ? UposName(*tag) : kMaskSymbol;
      }
      out += std::to_string(token.index);
      for (std::string_view field :
           {std::string_view(token.form), std::string_view(token.lemma), upos,
            std::string_view(token.xpos), std::string_view(token.feats)}) {
        out += '\t';
        out += field;
      }
      out += '\t';
      out += std::to_string(token.head);
      for (std::string_view field :
           {std::string_view(token.deprel), std::string_view(token.deps),
            std::string_view(token.misc)}) {
        out += '\t';
        out += field;
      }
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

void WriteConlluFile(const std::filesystem::path& path,
                     const Treebank& treebank,
                     std::span<const TagSequence> upos_overrides) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << WriteConllu(treebank, upos_overrides);
}

std::vector<std::vector<Upos>> GoldTags(const Treebank& treebank) {
  std::vector<std::vector<Upos>> tags;
  tags.reserve(treebank.size());
  for (std::size_t s = 0; s < treebank.size(); ++s) {
    const Sentence& sentence = treebank.sentences[s];
    std::vector<Upos>& row = tags.emplace_back();
    row.reserve(sentence.size());
    for (const Token& token : sentence.tokens) {
      const std::optional<Upos> tag = token.tag();
      if (!tag) {
        throw InvalidArgument("sentence " + std::to_string(s) + " token " +
                              std::to_string(token.index) +
                              " has unknown UPOS '" + token.upos + "'");
      }
      row.push_back(*tag);
    }
  }
  return tags;
}

}  // namespace tagprobe
