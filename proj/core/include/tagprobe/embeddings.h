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

#ifndef TAGPROBE_EMBEDDINGS_H_
#define TAGPROBE_EMBEDDINGS_H_

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>

namespace tagprobe {

// Pre-trained word vectors, one row per word.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::vector<std::string> words, Eigen::MatrixXd vectors,
                 Eigen::VectorXd unknown_vector);

  int dim() const { return static_cast<int>(vectors_.cols()); }
  int size() const { return static_cast<int>(words_.size()); }
  const std::vector<std::string>& words() const { return words_; }
  const Eigen::MatrixXd& vectors() const { return vectors_; }
  const Eigen::VectorXd& unknown_vector() const { return unknown_vector_; }

  // Row of `word`, or -1.
  int Find(std::string_view word) const;
  // The word's vector, or the unknown vector for unseen words.
  Eigen::VectorXd Lookup(std::string_view word) const;

 private:
  std::vector<std::string> words_;
  Eigen::MatrixXd vectors_;
  Eigen::VectorXd unknown_vector_;
  std::unordered_map<std::string, int> index_;
};

// Reads the fastText/word2vec text format: an optional "count dim" header,
// then one word per line followed by its components. With `restrict_to`,
// only listed words are kept. The unknown vector is the mean of the kept
// rows. Throws ParseError on inconsistent widths or non-numeric entries.
EmbeddingTable LoadVectors(
    std::istream& in,
    const std::unordered_set<std::string>* restrict_to = nullptr);
EmbeddingTable LoadVectorsFile(
    const std::filesystem::path& path,
    const std::unordered_set<std::string>* restrict_to = nullptr);

// Writes the text format with a "count dim" header. Values are printed with
// enough digits to read back exactly. The unknown vector is not written.
void WriteVectors(std::ostream& out, const EmbeddingTable& table);
void WriteVectorsFile(const std::filesystem::path& path, const EmbeddingTable& table);

struct PcaProjection {
  Eigen::VectorXd mean;
  Eigen::MatrixXd components;           // dim x out_dim, orthonormal columns
  Eigen::VectorXd explained_variance;   // descending, sample covariance
};

// Principal axes of the rows of `data` from a thin SVD of the centered
// matrix. Each component's largest-magnitude coordinate is made positive.
// Throws InvalidArgument when the centered data has rank below `out_dim`.
PcaProjection FitPca(const Eigen::MatrixXd& data, int out_dim);

// Centers and projects every vector (and the unknown vector) onto the
// `out_dim` leading principal components.
EmbeddingTable PcaCompress(const EmbeddingTable& table, int out_dim,
                           PcaProjection* projection = nullptr);

}  // namespace tagprobe

#endif  // TAGPROBE_EMBEDDINGS_H_
