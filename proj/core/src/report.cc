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

#include "tagprobe/report.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "tagprobe/errors.h"
#include "tagprobe/evaluation.h"
#include "tagprobe/experiment.h"
#include "tagprobe/vocabulary.h"

namespace tagprobe {
namespace {

using Json = nlohmann::ordered_json;

SystemAnalysis AnalyzeSystem(const AnalysisInput& input, const SystemPredictions& system,
                             const TagContextModel& bigram, const TagContextModel& head_rel,
                             const std::vector<std::vector<bool>>& oov) {
  SystemAnalysis out;
  out.name = system.name;
  out.accuracy = TaggingAccuracy(system.tags, input.gold);
  out.errors = CollectErrors(system.tags, input.gold);
  out.top_confusions = TopConfusions(out.errors);
  out.tag_scores = PerTagF1(system.tags, input.gold);
  out.bigram = MeanSurprisal(bigram, input.gold, out.errors);
  out.head_relation = MeanSurprisal(head_rel, input.gold, out.errors);
  out.oov = OovErrorStats(oov, out.errors);
  return out;
}

Json CountsJson(const ClassCounts& c, const std::string& a, const std::string& b) {
  Json j;
  j["errors_" + a] = c.errors_a;
  j["errors_" + b] = c.errors_b;
  j["tokens"] = c.tokens;
  j["ratio"] = c.ratio ? Json(*c.ratio) : Json(nullptr);
  return j;
}

Json ClassesJson(const ClassBreakdown& classes, const std::string& a, const std::string& b) {
  Json j;
  for (int c = 0; c < kNumWordClasses; ++c) {
    j[std::string(WordClassName(static_cast<WordClass>(c)))] =
        CountsJson(classes.classes[c], a, b);
  }
  j["all"] = CountsJson(classes.all, a, b);
  return j;
}

Json SurprisalJson(const SurprisalStats& s) {
  return Json{{"context", ContextKindName(s.context_kind)},
              {"mean_all", s.mean_all},
              {"mean_errors", s.mean_errors},
              {"tokens", s.tokens},
              {"error_tokens", s.error_tokens}};
}

Json TagScoresJson(const TagScores& scores) {
  Json j = Json::object();
  for (Upos tag : AllUpos()) {
    std::optional<TagScore> s = scores.Get(tag);
    if (!s) continue;
    j[std::string(UposName(tag))] = Json{{"gold", s->gold},
                                         {"predicted", s->predicted},
                                         {"correct", s->correct},
                                         {"precision", s->precision},
                                         {"recall", s->recall},
                                         {"f1", s->f1}};
  }
  return j;
}

Json SystemJson(const SystemAnalysis& s) {
  Json confusions = Json::array();
  for (const Confusion& c : s.top_confusions) {
    confusions.push_back(
        Json{{"gold", UposName(c.gold)}, {"predicted", UposName(c.predicted)}, {"count", c.count}});
  }
  return Json{{"name", s.name},
              {"accuracy", s.accuracy},
              {"errors", s.errors.size()},
              {"top_confusions", confusions},
              {"per_tag", TagScoresJson(s.tag_scores)},
              {"surprisal_bigram", SurprisalJson(s.bigram)},
              {"surprisal_head_relation", SurprisalJson(s.head_relation)},
              {"oov", Json{{"all", s.oov.all},
                           {"errors", s.oov.errors},
                           {"tokens", s.oov.tokens},
                           {"oov_tokens", s.oov.oov_tokens},
                           {"error_tokens", s.oov.error_tokens},
                           {"oov_error_tokens", s.oov.oov_error_tokens}}}};
}

std::string Percent(double fraction) { return fmt::format("{:.2f}", 100.0 * fraction); }
std::string Fixed(double value) { return fmt::format("{:.4f}", value); }

std::vector<std::pair<std::string, double>> ParseSeries(const std::string& csv) {
  std::vector<std::pair<std::string, double>> rows;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    auto comma = line.rfind(',');
    rows.emplace_back(line.substr(0, comma), std::stod(line.substr(comma + 1)));
  }
  return rows;
}

std::string EscapeXml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

TreebankAnalysis AnalyzeTreebank(const AnalysisInput& input) {
  TreebankAnalysis out;
  out.treebank = input.treebank;
  out.tokens = input.gold.TokenCount();
  TagContextModel bigram(input.train, ContextKind::kBigram, input.surprisal);
  TagContextModel head_rel(input.train, ContextKind::kHeadRelation, input.surprisal);
  Vocabulary vocabulary = Vocabulary::Build(input.train);
  std::vector<std::vector<bool>> oov = OovFlags(vocabulary, input.gold);
  out.a = AnalyzeSystem(input, input.a, bigram, head_rel, oov);
  out.b = AnalyzeSystem(input, input.b, bigram, head_rel, oov);
  out.crossover = ComputeCrossover(out.a.errors, out.b.errors);
  out.classes = ComputeClassBreakdown(out.a.errors, out.b.errors, input.gold);
  return out;
}

AnalysisReport BuildAnalysisReport(std::vector<TreebankAnalysis> treebanks) {
  if (treebanks.empty()) throw InvalidArgument("analysis needs at least one treebank");
  AnalysisReport report;
  report.system_a = treebanks.front().a.name;
  report.system_b = treebanks.front().b.name;
  if (report.system_a == report.system_b) {
    throw InvalidArgument("the two systems need distinct names");
  }
  for (const TreebankAnalysis& t : treebanks) {
    if (t.a.name != report.system_a || t.b.name != report.system_b) {
      throw InvalidArgument("treebank " + t.treebank + " compares different systems");
    }
    Accumulate(report.pooled_classes, t.classes);
    report.pooled_a.Merge(t.a.tag_scores);
    report.pooled_b.Merge(t.b.tag_scores);
    report.mean_only_a += static_cast<double>(t.crossover.only_a);
    report.mean_only_b += static_cast<double>(t.crossover.only_b);
    report.mean_both += static_cast<double>(t.crossover.both);
  }
  double n = static_cast<double>(treebanks.size());
  report.mean_only_a /= n;
  report.mean_only_b /= n;
  report.mean_both /= n;
  report.treebanks = std::move(treebanks);
  return report;
}

std::string AnalysisReportJson(const AnalysisReport& report) {
  const std::string& a = report.system_a;
  const std::string& b = report.system_b;
  Json treebanks = Json::array();
  for (const TreebankAnalysis& t : report.treebanks) {
    const Crossover& x = t.crossover;
    treebanks.push_back(Json{{"treebank", t.treebank},
                             {"tokens", t.tokens},
                             {"crossover", Json{{"only_" + a, x.only_a},
                                                {"only_" + b, x.only_b},
                                                {"both", x.both},
                                                {"union", x.union_size},
                                                {"only_" + a + "_share", x.OnlyAShare()},
                                                {"only_" + b + "_share", x.OnlyBShare()},
                                                {"both_share", x.BothShare()}}},
                             {"classes", ClassesJson(t.classes, a, b)},
                             {"systems", Json::array({SystemJson(t.a), SystemJson(t.b)})}});
  }
  Json j{{"systems", Json::array({a, b})},
         {"treebanks", treebanks},
         {"pooled",
          Json{{"classes", ClassesJson(report.pooled_classes, a, b)},
               {"per_tag_" + a, TagScoresJson(report.pooled_a)},
               {"per_tag_" + b, TagScoresJson(report.pooled_b)},
               {"mean_crossover", Json{{"only_" + a, report.mean_only_a},
                                       {"only_" + b, report.mean_only_b},
                                       {"both", report.mean_both}}}}}};
  return j.dump(2) + "\n";
}

std::vector<CsvTable> AnalysisTables(const AnalysisReport& report) {
  const std::string& a = report.system_a;
  const std::string& b = report.system_b;
  std::vector<CsvTable> tables;

  std::string accuracy = fmt::format("treebank,tokens,{}_accuracy,{}_accuracy\n", a, b);
  for (const TreebankAnalysis& t : report.treebanks) {
    accuracy += fmt::format("{},{},{},{}\n", t.treebank, t.tokens, Percent(t.a.accuracy),
                            Percent(t.b.accuracy));
  }
  tables.push_back({"accuracy", accuracy});

  std::string classes = fmt::format("class,{}_errors,{}_errors,tokens,ratio\n", a, b);
  auto class_row = [&](std::string_view name, const ClassCounts& c) {
    classes += fmt::format("{},{},{},{},{}\n", name, c.errors_a, c.errors_b, c.tokens,
                           c.ratio ? fmt::format("{:.2f}", *c.ratio) : std::string());
  };
  for (int c = 0; c < kNumWordClasses; ++c) {
    class_row(WordClassName(static_cast<WordClass>(c)), report.pooled_classes.classes[c]);
  }
  class_row("all", report.pooled_classes.all);
  tables.push_back({"class_breakdown", classes});

  std::string confusions = "treebank,system,rank,gold,predicted,count,total_errors\n";
  for (const TreebankAnalysis& t : report.treebanks) {
    for (const SystemAnalysis* s : {&t.a, &t.b}) {
      for (std::size_t r = 0; r < s->top_confusions.size(); ++r) {
        const Confusion& c = s->top_confusions[r];
        confusions += fmt::format("{},{},{},{},{},{},{}\n", t.treebank, s->name, r + 1,
                                  UposName(c.gold), UposName(c.predicted), c.count,
                                  s->errors.size());
      }
    }
  }
  tables.push_back({"top_confusions", confusions});

  std::string f1 = fmt::format("class,tag,{}_f1,{}_f1\n", a, b);
  for (int c = 0; c < kNumWordClasses; ++c) {
    for (Upos tag : AllUpos()) {
      if (static_cast<int>(ClassOf(tag)) != c) continue;
      std::optional<TagScore> sa = report.pooled_a.Get(tag);
      std::optional<TagScore> sb = report.pooled_b.Get(tag);
      if (!sa && !sb) continue;
      f1 += fmt::format("{},{},{},{}\n", WordClassName(static_cast<WordClass>(c)), UposName(tag),
                        sa ? Percent(sa->f1) : "", sb ? Percent(sb->f1) : "");
    }
  }
  tables.push_back({"per_tag_f1", f1});
  return tables;
}

std::vector<CsvTable> AnalysisFigureSeries(const AnalysisReport& report) {
  const std::string& a = report.system_a;
  const std::string& b = report.system_b;
  std::vector<CsvTable> series;
  series.push_back({"crossover_mean",
                    fmt::format("label,value\nonly_{},{}\nboth,{}\nonly_{},{}\n", a,
                                Fixed(report.mean_only_a), Fixed(report.mean_both), b,
                                Fixed(report.mean_only_b))});

  auto per_treebank = [&](const std::string& name, auto value) {
    std::string text = "label,value\n";
    for (const TreebankAnalysis& t : report.treebanks) {
      text += fmt::format("{},{}\n", t.treebank, Fixed(value(t)));
    }
    series.push_back({name, text});
  };
  per_treebank("surprisal_bigram_all", [](const TreebankAnalysis& t) { return t.a.bigram.mean_all; });
  per_treebank("surprisal_bigram_errors_" + a,
               [](const TreebankAnalysis& t) { return t.a.bigram.mean_errors; });
  per_treebank("surprisal_bigram_errors_" + b,
               [](const TreebankAnalysis& t) { return t.b.bigram.mean_errors; });
  per_treebank("surprisal_head_relation_all",
               [](const TreebankAnalysis& t) { return t.a.head_relation.mean_all; });
  per_treebank("surprisal_head_relation_errors_" + a,
               [](const TreebankAnalysis& t) { return t.a.head_relation.mean_errors; });
  per_treebank("surprisal_head_relation_errors_" + b,
               [](const TreebankAnalysis& t) { return t.b.head_relation.mean_errors; });
  per_treebank("oov_all", [](const TreebankAnalysis& t) { return t.a.oov.all; });
  per_treebank("oov_errors_" + a, [](const TreebankAnalysis& t) { return t.a.oov.errors; });
  per_treebank("oov_errors_" + b, [](const TreebankAnalysis& t) { return t.b.oov.errors; });
  return series;
}

std::string BarChartSvg(const std::string& title,
                        const std::vector<std::pair<std::string, double>>& bars) {
  constexpr int kBarWidth = 40, kGap = 20, kHeight = 200, kTop = 30, kBottom = 40;
  int width = std::max(200, kGap + static_cast<int>(bars.size()) * (kBarWidth + kGap));
  double max_value = 0.0;
  for (const auto& bar : bars) {
    if (std::isfinite(bar.second)) max_value = std::max(max_value, bar.second);
  }
  if (max_value <= 0.0) max_value = 1.0;
  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\">\n"
      "<text x=\"{}\" y=\"18\" font-size=\"14\">{}</text>\n",
      width, kTop + kHeight + kBottom, kGap, EscapeXml(title));
  for (std::size_t i = 0; i < bars.size(); ++i) {
    double value = std::isfinite(bars[i].second) ? std::max(0.0, bars[i].second) : 0.0;
    int h = static_cast<int>(std::lround(kHeight * value / max_value));
    int x = kGap + static_cast<int>(i) * (kBarWidth + kGap);
    svg += fmt::format(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#4c72b0\"/>\n"
        "<text x=\"{}\" y=\"{}\" font-size=\"10\">{}</text>\n"
        "<text x=\"{}\" y=\"{}\" font-size=\"10\">{:.2f}</text>\n",
        x, kTop + kHeight - h, kBarWidth, h, x, kTop + kHeight + 14, EscapeXml(bars[i].first), x,
        kTop + kHeight - h - 3, bars[i].second);
  }
  return svg + "</svg>\n";
}

void WriteAnalysisReport(const AnalysisReport& report, const std::filesystem::path& out_dir,
                         bool svg) {
  WriteTextFile(out_dir / "reports" / "analysis.json", AnalysisReportJson(report));
  for (const CsvTable& table : AnalysisTables(report)) {
    WriteTextFile(out_dir / "tables" / (table.name + ".csv"), table.text);
  }
  for (const CsvTable& series : AnalysisFigureSeries(report)) {
    WriteTextFile(out_dir / "figures" / (series.name + ".csv"), series.text);
    if (svg) {
      WriteTextFile(out_dir / "figures" / (series.name + ".svg"),
                BarChartSvg(series.name, ParseSeries(series.text)));
    }
  }
}

}  // namespace tagprobe
