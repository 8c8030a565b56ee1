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

#include "cli.h"

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "tagprobe/conllu.h"
#include "tagprobe/embeddings.h"
#include "tagprobe/errors.h"
#include "tagprobe/evaluation.h"
#include "tagprobe/experiment.h"
#include "tagprobe/model.h"
#include "tagprobe/probe.h"
#include "tagprobe/report.h"
#include "tagprobe/tag_masking.h"
#include "tagprobe/toy_treebank.h"
#include "tagprobe/trainer.h"
#include "tagprobe/vocabulary.h"

namespace tagprobe::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

// Flags shared by every command that reads treebanks or writes results.
struct CommonFlags {
  std::string config;
  std::string train;
  std::string dev;
  std::string test;
  std::string embeddings;
  std::string out;
  std::string name;
  std::string kind;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> schemes;
  std::optional<int> jobs;
  std::optional<int> max_epochs;
  bool toy = false;
};

void AddCommonFlags(CLI::App* app, CommonFlags& f) {
  app->add_option("--config", f.config, "JSON experiment config or manifest");
  app->add_option("--train", f.train, "training split (CoNLL-U)");
  app->add_option("--dev", f.dev, "development split (CoNLL-U)");
  app->add_option("--test", f.test, "test split (CoNLL-U)");
  app->add_option("--embeddings", f.embeddings, "word vectors in .vec text format");
  app->add_option("--out", f.out, "output directory");
  app->add_option("--name", f.name, "treebank name used in file names and tables");
  app->add_option("--seed", f.seeds, "random seed(s)")->delimiter(',');
  app->add_option("--jobs", f.jobs, "models trained concurrently")->check(CLI::PositiveNumber);
  app->add_option("--max-epochs", f.max_epochs, "override max_epochs for every model")
      ->check(CLI::PositiveNumber);
}

ExperimentConfig ResolveConfig(const CommonFlags& f) {
  ExperimentConfig c = f.toy ? ToyExperimentConfig() : ExperimentConfig();
  if (!f.config.empty()) c = LoadExperimentConfig(f.config);
  if (!f.train.empty()) {
    TreebankPaths paths;
    paths.train = f.train;
    paths.dev = f.dev;
    paths.test = f.test;
    paths.name = f.name.empty() ? fs::path(f.train).stem().string() : f.name;
    c.treebanks = {paths};
  } else if (!f.dev.empty() || !f.test.empty()) {
    if (c.treebanks.size() > 1) {
      throw InvalidArgument("--dev/--test need --train when the config lists several treebanks");
    }
    if (c.treebanks.empty()) c.treebanks.emplace_back();
    if (!f.dev.empty()) c.treebanks[0].dev = f.dev;
    if (!f.test.empty()) c.treebanks[0].test = f.test;
    if (!f.name.empty()) c.treebanks[0].name = f.name;
    if (c.treebanks[0].name.empty()) {
      c.treebanks[0].name = fs::path(f.test.empty() ? f.dev : f.test).stem().string();
    }
  }
  if (!f.embeddings.empty()) c.embeddings = fs::path(f.embeddings);
  if (!f.out.empty()) c.out = f.out;
  if (!f.seeds.empty()) c.seeds = f.seeds;
  if (f.jobs) c.jobs = *f.jobs;
  if (f.max_epochs) {
    for (TrainConfig* t : {&c.tagger_train, &c.parser_train}) {
      t->max_epochs = *f.max_epochs;
      t->patience = std::min(t->patience, std::max(1, *f.max_epochs - 1));
    }
  }
  if (!f.schemes.empty()) {
    c.schemes.clear();
    for (const std::string& s : f.schemes) {
      std::optional<SchemeKind> kind = ParseScheme(s);
      if (!kind) throw InvalidArgument("unknown scheme '" + s + "'");
      c.schemes.push_back(*kind);
    }
  }
  if (!f.kind.empty()) c.kind = f.kind == "tagger" ? HeadKind::kTagger : HeadKind::kParser;
  return c;
}

// Records files written below the output directory for the manifest.
class Outputs {
 public:
  explicit Outputs(fs::path root) : root_(std::move(root)) { PrepareOutputDirectory(root_); }

  fs::path Path(const fs::path& relative) {
    files_.push_back(relative);
    return root_ / relative;
  }
  void Text(const fs::path& relative, std::string_view text) {
    WriteTextFile(Path(relative), text);
  }
  void Conllu(const fs::path& relative, const Treebank& treebank) {
    WriteTextFile(Path(relative), WriteConllu(treebank));
  }
  void Checkpoint(const fs::path& relative, const ModelState& state) {
    SaveCheckpointFile(state, Path(relative));
  }
  void Manifest(std::string_view command, const ExperimentConfig& config) {
    WriteManifest(root_, command, config, files_);
    std::cout << "wrote " << files_.size() << " files and manifest.json to " << root_.string()
              << '\n';
  }

 private:
  fs::path root_;
  std::vector<fs::path> files_;
};

// Tagger output, and optionally probe errors, over one split.
SplitEvidence EvidenceFor(const Treebank& split, const ModelState* tagger,
                          const ModelState* probe) {
  SplitEvidence evidence;
  if (tagger) {
    TagPredictions p = PredictTags(*tagger, split);
    evidence.predicted = std::move(p.tags);
    evidence.tagger_errors = std::move(p.errors);
  }
  if (probe) evidence.probe_errors = PredictTags(*probe, split).errors;
  return evidence;
}

// Tag inputs for `split` under `scheme`, using whichever models the scheme
// needs.
std::optional<TagInputs> TagsFor(SchemeKind scheme, const Treebank& split,
                                 const ModelState* tagger, const ModelState* probe) {
  if (scheme == SchemeKind::kNone) return std::nullopt;
  const bool needs_tagger = scheme == SchemeKind::kPred ||
                            scheme == SchemeKind::kMaskTaggerErrors ||
                            scheme == SchemeKind::kMaskAllButTaggerErrors;
  if (needs_tagger && !tagger) {
    throw InvalidArgument(std::string(SchemeName(scheme)) + " needs --tagger <checkpoint>");
  }
  if (scheme == SchemeKind::kMaskAllButProbeErrors && !probe) {
    throw InvalidArgument(std::string(SchemeName(scheme)) + " needs --probe <checkpoint>");
  }
  return ConditioningFor(scheme, split, EvidenceFor(split, tagger, probe)).tags;
}

std::optional<ModelState> MaybeLoad(const std::string& path) {
  if (path.empty()) return std::nullopt;
  return LoadCheckpointFile(path);
}

const TagInputs* Ptr(const std::optional<TagInputs>& tags) { return tags ? &*tags : nullptr; }

std::string ModelLabel(const std::string& treebank, HeadKind kind,
                       std::optional<SchemeKind> scheme, std::uint64_t seed) {
  std::string label = fmt::format("{}-{}", treebank, HeadKindName(kind));
  if (scheme) label += fmt::format("-{}", SchemeName(*scheme));
  return label + fmt::format("-seed{}", seed);
}

// train ---------------------------------------------------------------------

struct TrainFlags {
  CommonFlags common;
  std::string tagger;
  std::string probe;
};

int CmdTrain(const TrainFlags& flags) {
  ExperimentConfig config = ResolveConfig(flags.common);
  config.Validate(/*need_dev=*/true, /*need_test=*/false);
  if (config.treebanks.size() != 1) throw InvalidArgument("train expects a single treebank");
  const bool parser = config.kind == HeadKind::kParser;
  SchemeKind scheme = SchemeKind::kNone;
  if (parser && config.schemes.size() == 1) {
    scheme = config.schemes.front();
  } else if (!flags.common.schemes.empty()) {
    throw InvalidArgument("train takes one --scheme, and only for parsers");
  }
  config.schemes = {scheme};

  TreebankSplits splits = ReadTreebank(config.treebanks.front());
  std::optional<EmbeddingTable> embeddings = LoadEmbeddingsFor(config, splits);
  std::optional<ModelState> tagger = MaybeLoad(flags.tagger);
  std::optional<ModelState> probe = MaybeLoad(flags.probe);
  const ModelState* tagger_ptr = tagger ? &*tagger : nullptr;
  const ModelState* probe_ptr = probe ? &*probe : nullptr;
  std::optional<TagInputs> train_tags = TagsFor(scheme, splits.train, tagger_ptr, probe_ptr);
  std::optional<TagInputs> dev_tags = TagsFor(scheme, splits.dev, tagger_ptr, probe_ptr);
  std::optional<TagInputs> test_tags;
  if (!splits.test.sentences.empty()) test_tags = TagsFor(scheme, splits.test, tagger_ptr, probe_ptr);

  Outputs out(config.out);
  const Vocabulary vocabulary = Vocabulary::Build(splits.train);
  for (std::uint64_t seed : config.seeds) {
    EncoderConfig encoder = config.encoder;
    encoder.use_tags = scheme != SchemeKind::kNone;
    ModelState state = InitializeModel(encoder, config.kind, vocabulary,
                                       embeddings ? &*embeddings : nullptr, seed);
    if (parser) state.tag_scheme = std::string(SchemeName(scheme));
    TrainConfig train_config = parser ? config.parser_train : config.tagger_train;
    train_config.seed = seed;
    TrainOptions options;
    options.on_epoch = [](const EpochRecord& e) {
      spdlog::info("epoch {:3d}  loss {:.4f}  dev {:.4f}", e.epoch, e.train_loss, e.dev_metric);
    };
    TrainResult result = Train(std::move(state), splits.train, splits.dev, train_config,
                               Ptr(train_tags), Ptr(dev_tags), options);
    const std::string label = ModelLabel(splits.name, config.kind,
                                         parser ? std::optional(scheme) : std::nullopt, seed);
    out.Checkpoint(fs::path("checkpoints") / (label + ".ckpt"), result.state);
    out.Text(fs::path("reports") / (label + "-history.csv"), result.history.ToCsv());
    std::cout << fmt::format("{}: best dev {:.4f} at epoch {} ({} steps)\n", label,
                             result.history.best_dev_metric, result.history.best_epoch,
                             result.history.steps);
    if (!splits.test.sentences.empty()) {
      Treebank predicted =
          parser ? WithPredictedTrees(splits.test, PredictTrees(result.state, splits.test,
                                                                Ptr(test_tags),
                                                                train_config.decoder))
                 : WithPredictedTags(splits.test, PredictTags(result.state, splits.test).tags);
      out.Conllu(fs::path("reports") / (label + "-test.conllu"), predicted);
    }
  }
  out.Manifest("train", config);
  return 0;
}

// probe ---------------------------------------------------------------------

struct ProbeFlags {
  CommonFlags common;
  std::string checkpoint;
};

int CmdProbe(const ProbeFlags& flags) {
  ExperimentConfig config = ResolveConfig(flags.common);
  config.Validate(/*need_dev=*/false, /*need_test=*/false);
  const TreebankSplits splits = ReadTreebank(config.treebanks.front());
  if (splits.dev.sentences.empty() && splits.test.sentences.empty()) {
    throw InvalidArgument("probe needs --dev and/or --test to evaluate on");
  }
  const ModelState source = LoadCheckpointFile(flags.checkpoint);
  Outputs out(config.out);
  const std::string stem = fs::path(flags.checkpoint).stem().string();
  for (std::uint64_t seed : config.seeds) {
    TrainConfig train_config =
        source.head == HeadKind::kParser ? config.parser_train : config.tagger_train;
    train_config.seed = seed;
    const Treebank& first = splits.test.sentences.empty() ? splits.dev : splits.test;
    ProbeResult probe = source.head == HeadKind::kTagger
                            ? ValidateProbe(source, splits.train, first, train_config)
                            : ProbeAsTagger(source, splits.train, first, train_config);
    const std::string label = fmt::format("{}-probe-seed{}", stem, seed);
    out.Checkpoint(fs::path("checkpoints") / (label + ".ckpt"), probe.probe);
    for (const Treebank* split : {&splits.dev, &splits.test}) {
      if (split->sentences.empty()) continue;
      ProbeReport report = split == &first ? probe.report : EvaluateProbe(probe, *split);
      if (split != &first && source.head == HeadKind::kTagger) {
        report.source_accuracy = PredictTags(source, *split).accuracy;
      }
      const std::string split_name(SplitName(split->split));
      out.Text(fs::path("reports") / (label + "-" + split_name + ".json"),
               ProbeReportJson(report));
      out.Conllu(fs::path("reports") / (label + "-" + split_name + ".conllu"),
                 WithPredictedTags(*split, PredictTags(probe.probe, *split).tags));
      std::cout << fmt::format("{} {}: accuracy {:.4f}, {} errors, encoder {}\n", label,
                               split_name, report.accuracy, report.errors.size(),
                               report.encoder_unchanged() ? "unchanged" : "CHANGED");
    }
  }
  out.Manifest("probe", config);
  return 0;
}

// analyze -------------------------------------------------------------------

struct AnalyzeFlags {
  CommonFlags common;
  std::string gold;
  std::string pred_a;
  std::string pred_b;
  std::string checkpoint_a;
  std::string checkpoint_b;
  std::string name_a = "tagger";
  std::string name_b = "parser";
  std::string inputs;
  bool svg = false;
  bool unsmoothed = false;
};

std::vector<std::vector<Upos>> SystemTags(const std::string& conllu, const std::string& checkpoint,
                                          const Treebank& gold, const std::string& which) {
  if (!conllu.empty() && !checkpoint.empty()) {
    throw InvalidArgument("give either a prediction file or a checkpoint for system " + which);
  }
  if (!checkpoint.empty()) return PredictTags(LoadCheckpointFile(checkpoint), gold).tags;
  if (conllu.empty()) throw InvalidArgument("no predictions for system " + which);
  Treebank predicted = ReadConlluFile(conllu, gold.split);
  if (predicted.size() != gold.size()) {
    throw InvalidArgument(conllu + " has " + std::to_string(predicted.size()) +
                          " sentences, gold has " + std::to_string(gold.size()));
  }
  for (std::size_t s = 0; s < gold.size(); ++s) {
    if (predicted.sentences[s].size() != gold.sentences[s].size()) {
      throw InvalidArgument(conllu + ": sentence " + std::to_string(s + 1) +
                            " does not align with the gold file");
    }
  }
  return GoldTags(predicted);
}

int CmdAnalyze(const AnalyzeFlags& flags) {
  ExperimentConfig config = ResolveConfig(flags.common);
  config.svg = config.svg || flags.svg;
  SurprisalOptions surprisal{!flags.unsmoothed};

  struct Entry {
    std::string name, train, gold, pred_a, pred_b, checkpoint_a, checkpoint_b;
  };
  std::vector<Entry> entries;
  if (!flags.inputs.empty()) {
    std::ifstream in(flags.inputs);
    if (!in) throw InvalidArgument("cannot open " + flags.inputs);
    const fs::path base = fs::path(flags.inputs).parent_path();
    auto resolve = [&](const Json& j, const char* key) -> std::string {
      if (!j.contains(key)) return "";
      fs::path p = j.at(key).get<std::string>();
      return (p.is_absolute() ? p : base / p).string();
    };
    const Json listing = Json::parse(in);
    for (const Json& j : listing.at("treebanks")) {
      entries.push_back({j.at("name").get<std::string>(), resolve(j, "train"),
                         resolve(j, "gold"), resolve(j, "pred_a"), resolve(j, "pred_b"),
                         resolve(j, "checkpoint_a"), resolve(j, "checkpoint_b")});
    }
  } else {
    if (config.treebanks.size() != 1) {
      throw InvalidArgument("analyze needs --train and --gold (or --inputs)");
    }
    const TreebankPaths& t = config.treebanks.front();
    std::string gold = flags.gold.empty() ? t.test.string() : flags.gold;
    entries.push_back({t.name, t.train.string(), gold, flags.pred_a, flags.pred_b,
                       flags.checkpoint_a, flags.checkpoint_b});
  }

  std::vector<TreebankAnalysis> analyses;
  for (const Entry& e : entries) {
    if (e.train.empty() || e.gold.empty()) {
      throw InvalidArgument(e.name + ": analyze needs a training split and a gold file");
    }
    AnalysisInput input;
    input.treebank = e.name;
    input.train = ReadConlluFile(e.train, Split::kTrain, e.name);
    input.gold = ReadConlluFile(e.gold, Split::kTest, e.name);
    input.a = {flags.name_a, SystemTags(e.pred_a, e.checkpoint_a, input.gold, flags.name_a)};
    input.b = {flags.name_b, SystemTags(e.pred_b, e.checkpoint_b, input.gold, flags.name_b)};
    input.surprisal = surprisal;
    analyses.push_back(AnalyzeTreebank(input));
  }
  AnalysisReport report = BuildAnalysisReport(std::move(analyses));

  Outputs out(config.out);
  out.Text("reports/analysis.json", AnalysisReportJson(report));
  for (const CsvTable& table : AnalysisTables(report)) {
    out.Text(fs::path("tables") / (table.name + ".csv"), table.text);
  }
  for (const CsvTable& series : AnalysisFigureSeries(report)) {
    out.Text(fs::path("figures") / (series.name + ".csv"), series.text);
    if (config.svg) {
      std::vector<std::pair<std::string, double>> bars;
      std::istringstream lines(series.text);
      std::string line;
      std::getline(lines, line);
      while (std::getline(lines, line)) {
        const auto comma = line.rfind(',');
        bars.emplace_back(line.substr(0, comma), std::stod(line.substr(comma + 1)));
      }
      out.Text(fs::path("figures") / (series.name + ".svg"), BarChartSvg(series.name, bars));
    }
  }
  for (const TreebankAnalysis& t : report.treebanks) {
    std::cout << fmt::format(
        "{}: {} {:.2f}% ({} errors), {} {:.2f}% ({} errors), shared {}\n", t.treebank,
        t.a.name, 100 * t.a.accuracy, t.a.errors.size(), t.b.name, 100 * t.b.accuracy,
        t.b.errors.size(), t.crossover.both);
  }
  out.Manifest("analyze", config);
  return 0;
}

// mask-experiment -----------------------------------------------------------

struct MaskFlags {
  CommonFlags common;
  bool save_checkpoints = false;
  int toy_train = 500;
  int toy_dev = 100;
  int toy_test = 100;
};

int CmdMaskExperiment(const MaskFlags& flags) {
  ExperimentConfig config = ResolveConfig(flags.common);
  if (flags.common.toy && config.treebanks.empty()) {
    ToyTreebankOptions toy_options;
    toy_options.train_sentences = flags.toy_train;
    toy_options.dev_sentences = flags.toy_dev;
    toy_options.test_sentences = flags.toy_test;
    ToyTreebank toy = GenerateToyTreebank(toy_options);
    const fs::path data = config.out / "data";
    fs::create_directories(data);
    TreebankPaths paths{"toy", data / "toy-train.conllu", data / "toy-dev.conllu",
                        data / "toy-test.conllu"};
    WriteConlluFile(paths.train, toy.train);
    WriteConlluFile(paths.dev, toy.dev);
    WriteConlluFile(paths.test, toy.test);
    config.treebanks = {paths};
  }
  config.Validate();

  std::vector<TreebankSplits> treebanks;
  std::optional<EmbeddingTable> embeddings;
  for (const TreebankPaths& paths : config.treebanks) treebanks.push_back(ReadTreebank(paths));
  if (config.embeddings && treebanks.size() > 1) {
    throw InvalidArgument("one embeddings file cannot serve several treebanks; run them apart");
  }
  if (!treebanks.empty()) embeddings = LoadEmbeddingsFor(config, treebanks.front());

  MaskingConfig masking;
  masking.encoder = config.encoder;
  masking.tagger_train = config.tagger_train;
  masking.parser_train = config.parser_train;
  masking.schemes = config.schemes;
  masking.seeds = config.seeds;
  masking.jobs = config.jobs;
  masking.embeddings = embeddings ? &*embeddings : nullptr;

  Outputs out(config.out);
  ModelSink sink;
  if (flags.save_checkpoints) {
    sink = [&out](const std::string& label, const ModelState& state, const TrainHistory& h) {
      out.Checkpoint(fs::path("checkpoints") / (label + ".ckpt"), state);
      out.Text(fs::path("reports") / (label + "-history.csv"), h.ToCsv());
    };
  }
  MaskingResult result = RunMaskingExperiment(treebanks, masking, sink);

  out.Text("tables/las_by_scheme.csv", LasBySchemeCsv(result, config.schemes));
  out.Text("tables/las_table.csv", LasTableCsv(result, config.schemes));
  out.Text("tables/las_runs.csv", LasRunsCsv(result));
  Json seeds = Json::array();
  for (const SeedSummary& s : result.seeds) {
    seeds.push_back(Json{{"treebank", s.treebank},
                         {"seed", s.seed},
                         {"tagger_test_accuracy", s.tagger_test_accuracy},
                         {"probe_test_accuracy", s.probe_test_accuracy
                                                     ? Json(*s.probe_test_accuracy)
                                                     : Json(nullptr)}});
  }
  Json mean = Json::object();
  for (SchemeKind scheme : config.schemes) mean[std::string(SchemeName(scheme))] =
      result.MeanLas(scheme);
  out.Text("reports/masking.json",
           Json{{"seeds", seeds}, {"mean_test_las", mean}}.dump(2) + "\n");
  std::cout << LasTableCsv(result, config.schemes);
  out.Manifest("mask-experiment", config);
  return 0;
}

// eval ----------------------------------------------------------------------

struct EvalFlags {
  CommonFlags common;
  std::string checkpoint;
  std::string tagger;
  std::string probe;
  std::string decoder = "cle";
};

int CmdEval(const EvalFlags& flags) {
  ExperimentConfig config = ResolveConfig(flags.common);
  if (config.treebanks.empty()) throw InvalidArgument("eval needs --test (or --dev)");
  const TreebankPaths& paths = config.treebanks.front();
  const fs::path target = paths.test.empty() ? paths.dev : paths.test;
  if (target.empty()) throw InvalidArgument("eval needs --test (or --dev)");
  const Split split = paths.test.empty() ? Split::kDev : Split::kTest;
  const Treebank gold = ReadConlluFile(target, split, paths.name);
  const ModelState state = LoadCheckpointFile(flags.checkpoint);
  const std::string label =
      fs::path(flags.checkpoint).stem().string() + "-" + std::string(SplitName(split));

  Outputs out(config.out);
  Json report{{"checkpoint", flags.checkpoint},
              {"treebank", target.string()},
              {"kind", HeadKindName(state.head)},
              {"tokens", gold.TokenCount()}};
  if (state.head == HeadKind::kTagger) {
    TagPredictions p = PredictTags(state, gold);
    report["accuracy"] = p.accuracy;
    report["errors"] = p.errors.size();
    out.Conllu(fs::path("reports") / (label + ".conllu"), WithPredictedTags(gold, p.tags));
    std::cout << fmt::format("accuracy {:.4f} over {} tokens\n", p.accuracy, gold.TokenCount());
  } else {
    std::optional<SchemeKind> scheme = ParseScheme(state.tag_scheme.empty() ? "none"
                                                                             : state.tag_scheme);
    if (!scheme) throw InvalidArgument("checkpoint has unknown tag scheme " + state.tag_scheme);
    std::optional<ModelState> tagger = MaybeLoad(flags.tagger);
    std::optional<ModelState> probe = MaybeLoad(flags.probe);
    std::optional<TagInputs> tags =
        TagsFor(*scheme, gold, tagger ? &*tagger : nullptr, probe ? &*probe : nullptr);
    std::vector<PredictedTree> trees =
        PredictTrees(state, gold, Ptr(tags), ParseDecoderKind(flags.decoder));
    ParseScore score = AttachmentScores(trees, gold);
    report["scheme"] = SchemeName(*scheme);
    report["uas"] = score.uas;
    report["las"] = score.las;
    out.Conllu(fs::path("reports") / (label + ".conllu"), WithPredictedTrees(gold, trees));
    std::cout << fmt::format("UAS {:.4f}  LAS {:.4f} over {} tokens\n", score.uas, score.las,
                             score.token_count);
  }
  out.Text(fs::path("reports") / ("eval-" + label + ".json"), report.dump(2) + "\n");
  out.Manifest("eval", config);
  return 0;
}

// toy / pca -----------------------------------------------------------------

int CmdToy(const fs::path& out_dir, const ToyTreebankOptions& options) {
  ToyTreebank toy = GenerateToyTreebank(options);
  fs::create_directories(out_dir);
  WriteConlluFile(out_dir / "toy-train.conllu", toy.train);
  WriteConlluFile(out_dir / "toy-dev.conllu", toy.dev);
  WriteConlluFile(out_dir / "toy-test.conllu", toy.test);
  std::cout << fmt::format("wrote {}/{}/{} sentences to {}\n", toy.train.size(), toy.dev.size(),
                           toy.test.size(), out_dir.string());
  return 0;
}

int CmdPca(const std::string& input, const std::string& output, int dim) {
  EmbeddingTable table = LoadVectorsFile(input);
  PcaProjection projection;
  EmbeddingTable compressed = PcaCompress(table, dim, &projection);
  if (fs::path(output).has_parent_path()) fs::create_directories(fs::path(output).parent_path());
  WriteVectorsFile(output, compressed);
  const double kept = projection.explained_variance.sum();
  std::cout << fmt::format("{} vectors {} -> {} dims, retained variance {:.6g}\n",
                           table.size(), table.dim(), dim, kept);
  return 0;
}

}  // namespace

int Run(const std::vector<std::string>& args) {
  CLI::App app{"Tagging-error probes and tag-masked dependency parsing"};
  app.require_subcommand(1);
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off");

  TrainFlags train;
  CLI::App* train_cmd = app.add_subcommand("train", "train a tagger or parser");
  AddCommonFlags(train_cmd, train.common);
  train_cmd->add_option("--kind", train.common.kind, "tagger or parser")
      ->check(CLI::IsMember({"tagger", "parser"}));
  train_cmd->add_option("--scheme", train.common.schemes, "tag inputs for a parser");
  train_cmd->add_option("--tagger", train.tagger, "tagger checkpoint for predicted tags");
  train_cmd->add_option("--probe", train.probe, "probe checkpoint for probe-error masking");
  train_cmd->add_flag("--toy", train.common.toy, "start from the small toy configuration");

  ProbeFlags probe;
  CLI::App* probe_cmd = app.add_subcommand("probe", "fit a one-epoch tagging probe");
  AddCommonFlags(probe_cmd, probe.common);
  probe_cmd->add_option("--checkpoint", probe.checkpoint, "trained parser or tagger")
      ->required();
  probe_cmd->add_flag("--toy", probe.common.toy, "start from the small toy configuration");

  AnalyzeFlags analyze;
  CLI::App* analyze_cmd = app.add_subcommand("analyze", "compare the errors of two taggers");
  AddCommonFlags(analyze_cmd, analyze.common);
  analyze_cmd->add_option("--gold", analyze.gold, "gold CoNLL-U (defaults to --test)");
  analyze_cmd->add_option("--pred-a", analyze.pred_a, "CoNLL-U tagged by the first system");
  analyze_cmd->add_option("--pred-b", analyze.pred_b, "CoNLL-U tagged by the second system");
  analyze_cmd->add_option("--checkpoint-a", analyze.checkpoint_a, "first system as a model");
  analyze_cmd->add_option("--checkpoint-b", analyze.checkpoint_b, "second system as a model");
  analyze_cmd->add_option("--name-a", analyze.name_a, "first system's name");
  analyze_cmd->add_option("--name-b", analyze.name_b, "second system's name");
  analyze_cmd->add_option("--inputs", analyze.inputs, "JSON list of treebanks to pool");
  analyze_cmd->add_flag("--svg", analyze.svg, "also draw SVG bar charts");
  analyze_cmd->add_flag("--unsmoothed", analyze.unsmoothed, "no add-one smoothing");

  MaskFlags mask;
  CLI::App* mask_cmd =
      app.add_subcommand("mask-experiment", "train parsers under each tag scheme");
  AddCommonFlags(mask_cmd, mask.common);
  mask_cmd->add_option("--scheme", mask.common.schemes, "schemes to run")->delimiter(',');
  mask_cmd->add_flag("--toy", mask.common.toy, "generate and use the synthetic treebank");
  mask_cmd->add_option("--toy-train", mask.toy_train, "synthetic training sentences");
  mask_cmd->add_option("--toy-dev", mask.toy_dev, "synthetic development sentences");
  mask_cmd->add_option("--toy-test", mask.toy_test, "synthetic test sentences");
  mask_cmd->add_flag("--save-checkpoints", mask.save_checkpoints, "keep every trained model");

  EvalFlags eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "score a checkpoint on a treebank");
  AddCommonFlags(eval_cmd, eval.common);
  eval_cmd->add_option("--checkpoint", eval.checkpoint, "model to score")->required();
  eval_cmd->add_option("--tagger", eval.tagger, "tagger checkpoint for predicted tags");
  eval_cmd->add_option("--probe", eval.probe, "probe checkpoint for probe-error masking");
  eval_cmd->add_option("--decoder", eval.decoder, "cle or greedy");

  std::string toy_out = "toy";
  ToyTreebankOptions toy_options;
  CLI::App* toy_cmd = app.add_subcommand("toy", "write the synthetic treebank");
  toy_cmd->add_option("--out", toy_out, "output directory");
  toy_cmd->add_option("--seed", toy_options.seed, "generator seed");
  toy_cmd->add_option("--train-size", toy_options.train_sentences, "training sentences");
  toy_cmd->add_option("--dev-size", toy_options.dev_sentences, "development sentences");
  toy_cmd->add_option("--test-size", toy_options.test_sentences, "test sentences");

  std::string pca_in, pca_out;
  int pca_dim = 100;
  CLI::App* pca_cmd = app.add_subcommand("pca", "compress word vectors with PCA");
  pca_cmd->add_option("--embeddings", pca_in, "input .vec file")->required();
  pca_cmd->add_option("--out", pca_out, "output .vec file")->required();
  pca_cmd->add_option("--dim", pca_dim, "output width")->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  spdlog::drop("tagprobe");
  auto logger = spdlog::stderr_color_st("tagprobe");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::from_str(log_level));

  try {
    if (*train_cmd) return CmdTrain(train);
    if (*probe_cmd) return CmdProbe(probe);
    if (*analyze_cmd) return CmdAnalyze(analyze);
    if (*mask_cmd) return CmdMaskExperiment(mask);
    if (*eval_cmd) return CmdEval(eval);
    if (*toy_cmd) return CmdToy(toy_out, toy_options);
    if (*pca_cmd) return CmdPca(pca_in, pca_out, pca_dim);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace tagprobe::cli
