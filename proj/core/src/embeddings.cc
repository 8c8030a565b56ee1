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

#include "tagprobe/embeddings.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>

#include "tagprobe/errors.h"

namespace tagprobe {
namespace {

std::vector<std::string_view> SplitSpaces(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i == line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

template <typename T>
std::optional<T> ParseNumber(std::string_view text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

}  // namespace

EmbeddingTable::EmbeddingTable(std::vector<std::string> words,
                               Eigen::MatrixXd vectors,
                               Eigen::VectorXd unknown_vector)
    : words_(std::move(words)),
      vectors_(std::move(vectors)),
      unknown_vector_(std::move(unknown_vector)) {
  if (static_cast<Eigen::Index>(words_.size()) != vectors_.rows()) {
    throw InvalidArgument("embedding table: word count does not match rows");
  }
  if (unknown_vector_.size() != vectors_.cols()) {
    throw InvalidArgument("embedding table: unknown vector has wrong width");
  }
  index_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    index_.emplace(words_[i], static_cast<int>(i));
  }
}

int EmbeddingTable::Find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  return it == index_.end() ? -1 : it->second;
}

Eigen::VectorXd EmbeddingTable::Lookup(std::string_view word) const {
  const int row = Find(word);
  if (row < 0) return unknown_vector_;
  return vectors_.row(row).transpose();
}

EmbeddingTable LoadVectors(std::istream& in,
                           const std::unordered_set<std::string>* restrict_to) {
  std::vector<std::string> words;
  std::vector<double> values;
  std::unordered_set<std::string> seen;
  int dim = -1;
  int line_number = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string_view> fields = SplitSpaces(line);
    if (fields.empty()) continue;
    if (line_number == 1 && fields.size() == 2 &&
        ParseNumber<long>(fields[0]) && ParseNumber<int>(fields[1])) {
      dim = *ParseNumber<int>(fields[1]);
      if (dim <= 0) throw ParseError("non-positive dimension in header", 1);
      continue;
    }
    const int width = static_cast<int>(fields.size()) - 1;
    if (dim < 0) dim = width;
    if (width != dim) {
      throw ParseError("expected " + std::to_string(dim) + " components, found " +
                           std::to_string(width),
                       line_number);
    }
    const std::string word(fields[0]);
    if (restrict_to && !restrict_to->contains(word)) continue;
    if (!seen.insert(word).second) continue;  // first occurrence wins
    for (int k = 1; k <= dim; ++k) {
      const std::optional<double> value = ParseNumber<double>(fields[k]);
      if (!value || !std::isfinite(*value)) {
        throw ParseError("non-numeric component '" + std::string(fields[k]) + "'",
                         line_number);
      }
      values.push_back(*value);
    }
    words.push_back(word);
  }
  if (dim < 0) dim = 0;
  const auto rows = static_cast<Eigen::Index>(words.size());
  Eigen::MatrixXd vectors(rows, dim);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (int c = 0; c < dim; ++c) vectors(r, c) = values[r * dim + c];
  }
  Eigen::VectorXd unknown = Eigen::VectorXd::Zero(dim);
  if (rows > 0) unknown = vectors.colwise().mean().transpose();
  return EmbeddingTable(std::move(words), std::move(vectors), std::move(unknown));
}

EmbeddingTable LoadVectorsFile(const std::filesystem::path& path,
                               const std::unordered_set<std::string>* restrict_to) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open embeddings " + path.string());
  try {
    return LoadVectors(in, restrict_to);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

void WriteVectors(std::ostream& out, const EmbeddingTable& table) {
  out << table.size() << ' ' << table.dim() << '\n';
  char buffer[32];
  for (int r = 0; r < table.size(); ++r) {
    out << table.words()[r];
    for (int c = 0; c < table.dim(); ++c) {
      // Shortest representation that parses back to the same double.
      auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), table.vectors()(r, c));
      out << ' ' << std::string_view(buffer, end - buffer);
    }
    out << '\n';
  }
}

void WriteVectorsFile(const std::filesystem::path& path, const EmbeddingTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  WriteVectors(out, table);
  if (!out) throw Error("failed writing " + path.string());
}

PcaProjection FitPca(const Eigen::MatrixXd& data, int out_dim) {
  const Eigen::Index n = data.rows();
  const Eigen::Index dim = data.cols();
  if (out_dim <= 0 || out_dim > dim) {
    throw InvalidArgument("PCA output dimension " + std::to_string(out_dim) +
                          " must be in [1, " + std::to_string(dim) + "]");
  }
  if (n < out_dim + 1) {
    throw InvalidArgument("PCA to " + std::to_string(out_dim) +
                          " dimensions needs more than " +
                          std::to_string(out_dim) + " vectors, got " +
                          std::to_string(n) + "; reduce the output dimension");
  }
  PcaProjection projection;
  projection.mean = data.colwise().mean().transpose();
  const Eigen::MatrixXd centered = data.rowwise() - projection.mean.transpose();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& singular = svd.singularValues();
  const double tolerance =
      std::max<double>(n, dim) * std::numeric_limits<double>::epsilon() *
      (singular.size() > 0 ? singular(0) : 0.0);
  if (singular.size() < out_dim || singular(out_dim - 1) <= tolerance) {
    throw InvalidArgument(
        "embedding vectors have rank below the requested PCA dimension " +
        std::to_string(out_dim) + "; reduce the output dimension");
  }
  projection.components = svd.matrixV().leftCols(out_dim);
  for (int k = 0; k < out_dim; ++k) {
    Eigen::Index largest = 0;
    projection.components.col(k).cwiseAbs().maxCoeff(&largest);
    if (projection.components(largest, k) < 0) {
      projection.components.col(k) *= -1.0;
    }
  }
  projection.explained_variance =
      singular.head(out_dim).array().square() / static_cast<double>(n - 1);
  return projection;
}

EmbeddingTable PcaCompress(const EmbeddingTable& table, int out_dim,
                           PcaProjection* projection) {
  PcaProjection fit = FitPca(table.vectors(), out_dim);
  Eigen::MatrixXd compressed =
      (table.vectors().rowwise() - fit.mean.transpose()) * fit.components;
  Eigen::VectorXd unknown =
      fit.components.transpose() * (table.unknown_vector() - fit.mean);
  if (projection) *projection = std::move(fit);
  return EmbeddingTable(table.words(), std::move(compressed), std::move(unknown));
}

}  // namespace tagprobe
