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
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.h"
#include "tagprobe/embeddings.h"
#include "tagprobe/errors.h"

namespace tagprobe {
namespace {

TEST(EmbeddingsTest, ReadsHeaderAndRows) {
  std::istringstream in("3 2\ncat 1 2\ndog 3 4\ncat 9 9\n");
  EmbeddingTable t = LoadVectors(in);
  EXPECT_EQ(t.size(), 2);
  EXPECT_EQ(t.dim(), 2);
  EXPECT_EQ(t.Lookup("cat"), Eigen::Vector2d(1, 2));  // first occurrence wins
  EXPECT_EQ(t.Lookup("bird"), Eigen::Vector2d(2, 3));  // mean of kept rows
  EXPECT_EQ(t.Find("dog"), 1);
  EXPECT_EQ(t.Find("bird"), -1);
}

TEST(EmbeddingsTest, HeaderIsOptionalAndRestrictionFilters) {
  std::istringstream in("a 1 0 0\nb 0 1 0\nc 0 0 1\n");
  std::unordered_set<std::string> keep = {"a", "c"};
  EmbeddingTable t = LoadVectors(in, &keep);
  EXPECT_EQ(t.size(), 2);
  EXPECT_EQ(t.dim(), 3);
  EXPECT_EQ(t.Find("b"), -1);
}

TEST(EmbeddingsTest, MalformedRowsReportTheLine) {
  std::istringstream width("2 2\na 1 2\nb 1 2 3\n");
  try {
    LoadVectors(width);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  std::istringstream text("a 1 x\n");
  try {
    LoadVectors(text);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1);
  }
}

TEST(EmbeddingsTest, WriteThenReadIsExact) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(4, 5);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
  EmbeddingTable t({"a", "b", "c", "é"}, m, m.colwise().mean().transpose());
  std::stringstream buffer;
  WriteVectors(buffer, t);
  EmbeddingTable back = LoadVectors(buffer);
  EXPECT_EQ(back.words(), t.words());
  EXPECT_EQ(back.vectors(), t.vectors());
}

// Eigendecomposition of the covariance is an independent route to the same
// spectrum and subspace as the SVD used by the library.
TEST(PcaTest, MatchesCovarianceEigendecomposition) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> dims(3, 12);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 50; ++trial) {
    const int d = dims(rng);
    const int k = std::uniform_int_distribution<int>(1, d - 1)(rng);
    const int n = std::uniform_int_distribution<int>(d + 2, 60)(rng);
    Eigen::MatrixXd data(n, d);
    for (Eigen::Index i = 0; i < data.size(); ++i) data.data()[i] = normal(rng) * (1 + i % d);
    PcaProjection pca = FitPca(data, k);
    testing::PcaOracle oracle = testing::PcaByCovariance(data, k);
    ASSERT_EQ(pca.explained_variance.size(), k);
    EXPECT_LT((pca.explained_variance - oracle.explained_variance).cwiseAbs().maxCoeff(), 1e-8);
    Eigen::MatrixXd centered = data.rowwise() - pca.mean.transpose();
    Eigen::MatrixXd residual =
        centered - centered * pca.components * pca.components.transpose();
    EXPECT_NEAR(residual.squaredNorm() / (n * d), oracle.reconstruction_error, 1e-8);
  }
}

TEST(PcaTest, ComponentsAreOrthonormalWithFixedSigns) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd data(30, 6);
  for (Eigen::Index i = 0; i < data.size(); ++i) data.data()[i] = normal(rng);
  PcaProjection pca = FitPca(data, 3);
  EXPECT_TRUE((pca.components.transpose() * pca.components)
                  .isApprox(Eigen::MatrixXd::Identity(3, 3), 1e-12));
  for (int c = 0; c < 3; ++c) {
    Eigen::Index row;
    pca.components.col(c).cwiseAbs().maxCoeff(&row);
    EXPECT_GT(pca.components(row, c), 0.0);
  }
  for (int c = 1; c < 3; ++c) {
    EXPECT_GE(pca.explained_variance(c - 1), pca.explained_variance(c));
  }
}

TEST(PcaTest, RankDeficientInputIsRejected) {
  Eigen::MatrixXd data(3, 5);
  data.setRandom();
  EXPECT_THROW(FitPca(data, 3), InvalidArgument);  // 3 centered rows have rank 2
  Eigen::MatrixXd flat = Eigen::MatrixXd::Ones(10, 4);
  EXPECT_THROW(FitPca(flat, 1), InvalidArgument);
}

TEST(PcaTest, CompressProjectsVectorsAndUnknown) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(20, 6);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
  std::vector<std::string> words;
  for (int i = 0; i < 20; ++i) words.push_back("w" + std::to_string(i));
  EmbeddingTable t(words, m, Eigen::VectorXd::Zero(6));
  PcaProjection projection;
  EmbeddingTable c = PcaCompress(t, 2, &projection);
  EXPECT_EQ(c.dim(), 2);
  EXPECT_EQ(c.size(), 20);
  Eigen::RowVectorXd expected = (m.row(5) - projection.mean.transpose()) * projection.components;
  EXPECT_TRUE(c.vectors().row(5).isApprox(expected, 1e-12));
  Eigen::VectorXd unknown = projection.components.transpose() * (-projection.mean);
  EXPECT_TRUE(c.unknown_vector().isApprox(unknown, 1e-12));
}

}  // namespace
}  // namespace tagprobe
