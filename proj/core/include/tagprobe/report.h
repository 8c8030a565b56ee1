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

#ifndef TAGPROBE_REPORT_H_
#define TAGPROBE_REPORT_H_

#include <filesystem>
#include <string>
#include <vector>

#include "tagprobe/conllu.h"
#include "tagprobe/error_analysis.h"
#include "tagprobe/error_set.h"
#include "tagprobe/upos.h"

namespace tagprobe {

// Tag predictions of one system over a gold treebank.
struct SystemPredictions {
  std::string name;
  std::vector<std::vector<Upos>> tags;
};

// Everything needed to compare two taggers on one treebank. `train` supplies
// the surprisal estimates and the vocabulary for OOV flags.
struct AnalysisInput {
  std::string treebank;
  Treebank train;
  Treebank gold;
  SystemPredictions a;
  SystemPredictions b;
  SurprisalOptions surprisal;
};

struct SystemAnalysis {
  std::string name;
  double accuracy = 0.0;
  ErrorSet errors;
  std::vector<Confusion> top_confusions;
  TagScores tag_scores;
  SurprisalStats bigram;
  SurprisalStats head_relation;
  OovStats oov;
};

struct TreebankAnalysis {
  std::string treebank;
  std::size_t tokens = 0;
  SystemAnalysis a;
  SystemAnalysis b;
  Crossover crossover;
  ClassBreakdown classes;
};

struct AnalysisReport {
  std::string system_a;
  std::string system_b;
  std::vector<TreebankAnalysis> treebanks;
  ClassBreakdown pooled_classes;
  TagScores pooled_a;
  TagScores pooled_b;
  // Mean crossover counts across treebanks.
  double mean_only_a = 0.0;
  double mean_only_b = 0.0;
  double mean_both = 0.0;
};

TreebankAnalysis AnalyzeTreebank(const AnalysisInput& input);

// Pools per-treebank results. All entries must compare the same two systems.
AnalysisReport BuildAnalysisReport(std::vector<TreebankAnalysis> treebanks);

// Deterministic JSON: fixed key order and shortest round-trip numbers.
std::string AnalysisReportJson(const AnalysisReport& report);

struct CsvTable {
  std::string name;  // file stem
  std::string text;
};

// Tabular views: accuracy, class_breakdown, top_confusions, per_tag_f1.
std::vector<CsvTable> AnalysisTables(const AnalysisReport& report);
// Two-column (label,value) series behind the crossover, surprisal and OOV
// charts.
std::vector<CsvTable> AnalysisFigureSeries(const AnalysisReport& report);

// Writes reports/analysis.json, tables/*.csv and figures/*.csv under
// `out_dir`, plus simple SVG bar charts when `svg` is set.
void WriteAnalysisReport(const AnalysisReport& report, const std::filesystem::path& out_dir,
                         bool svg = false);

// Renders a labelled bar chart of one (label,value) series.
std::string BarChartSvg(const std::string& title,
                        const std::vector<std::pair<std::string, double>>& bars);

}  // namespace tagprobe

#endif  // TAGPROBE_REPORT_H_
