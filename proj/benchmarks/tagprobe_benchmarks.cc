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
#include <string>

#include <benchmark/benchmark.h>

#include "tagprobe/conllu.h"
#include "tagprobe/decoder.h"
#include "tagprobe/error_analysis.h"
#include "tagprobe/error_set.h"
#include "tagprobe/experiment.h"
#include "tagprobe/model.h"
#include "tagprobe/toy_treebank.h"
#include "tagprobe/trainer.h"

namespace tagprobe {
namespace {

const ToyTreebank& Toy() {
  static const ToyTreebank toy = [] {
    ToyTreebankOptions options;
    options.train_sentences = 200;
    options.dev_sentences = 20;
    options.test_sentences = 20;
    return GenerateToyTreebank(options);
  }();
  return toy;
}

void BM_ChuLiuEdmonds(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  nn::Matrix scores(n, n + 1);
  for (Eigen::Index i = 0; i < scores.size(); ++i) scores.data()[i] = normal(rng);
  for (auto _ : state) benchmark::DoNotOptimize(MaxSpanningArborescence(scores));
  state.SetComplexityN(n);
}
BENCHMARK(BM_ChuLiuEdmonds)->RangeMultiplier(2)->Range(8, 128)->Complexity();

void BM_ConlluRoundTrip(benchmark::State& state) {
  const std::string text = WriteConllu(Toy().train);
  for (auto _ : state) benchmark::DoNotOptimize(WriteConllu(ParseConlluString(text)));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ConlluRoundTrip);

void BM_Predict(benchmark::State& state) {
  const HeadKind head = state.range(0) == 0 ? HeadKind::kTagger : HeadKind::kParser;
  const Treebank& data = Toy().dev;
  ModelState model = InitializeModel(ToyExperimentConfig().encoder, head,
                                     Vocabulary::Build(Toy().train), nullptr, 1);
  for (auto _ : state) {
    if (head == HeadKind::kTagger) {
      benchmark::DoNotOptimize(PredictTags(model, data));
    } else {
      benchmark::DoNotOptimize(PredictTrees(model, data));
    }
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * data.TokenCount()));
  state.SetLabel(std::string(HeadKindName(head)));
}
BENCHMARK(BM_Predict)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_TrainEpoch(benchmark::State& state) {
  const Treebank& data = Toy().dev;
  ModelState model = InitializeModel(ToyExperimentConfig().encoder, HeadKind::kParser,
                                     Vocabulary::Build(data), nullptr, 1);
  TrainConfig config;
  config.max_epochs = 1;
  TrainOptions options;
  options.select_on_dev = false;
  for (auto _ : state) benchmark::DoNotOptimize(Train(model, data, data, config, nullptr, nullptr, options));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * data.TokenCount()));
}
BENCHMARK(BM_TrainEpoch)->Unit(benchmark::kMillisecond);

void BM_Surprisal(benchmark::State& state) {
  const ContextKind kind = state.range(0) == 0 ? ContextKind::kBigram : ContextKind::kHeadRelation;
  const ErrorSet errors;
  for (auto _ : state) {
    TagContextModel model(Toy().train, kind);
    benchmark::DoNotOptimize(MeanSurprisal(model, Toy().test, errors));
  }
  state.SetLabel(std::string(ContextKindName(kind)));
}
BENCHMARK(BM_Surprisal)->Arg(0)->Arg(1);

}  // namespace
}  // namespace tagprobe

BENCHMARK_MAIN();
