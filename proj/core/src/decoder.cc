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

#include "tagprobe/decoder.h"

#include <limits>

#include "tagprobe/errors.h"

namespace tagprobe {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Dense Chu-Liu/Edmonds over nodes 0..m-1 with root 0. weight(h, d) is the
// score of arc h -> d. Returns head[d] for every node (head[0] = -1).
std::vector<int> Edmonds(const Eigen::MatrixXd& weight) {
  const int m = static_cast<int>(weight.rows());
  std::vector<int> head(m, -1);
  for (int d = 1; d < m; ++d) {
    double best = kNegInf;
    for (int h = 0; h < m; ++h) {
      if (h == d) continue;
      if (weight(h, d) > best) {
        best = weight(h, d);
        head[d] = h;
      }
    }
  }

  // Look for a cycle among the greedy choices.
  std::vector<int> color(m, 0);  // 0 unvisited, else id of the walk
  std::vector<int> cycle;
  for (int start = 1; start < m && cycle.empty(); ++start) {
    int node = start;
    while (node > 0 && color[node] == 0) {
      color[node] = start;
      node = head[node];
    }
    if (node > 0 && color[node] == start) {
      int v = node;
      do {
        cycle.push_back(v);
        v = head[v];
      } while (v != node);
    }
  }
  if (cycle.empty()) return head;

  // Contract the cycle into a single node `c` placed last.
  std::vector<bool> in_cycle(m, false);
  double cycle_score = 0.0;
  for (int v : cycle) {
    in_cycle[v] = true;
    cycle_score += weight(head[v], v);
  }
  std::vector<int> to_new(m, -1);
  std::vector<int> to_old;
  for (int v = 0; v < m; ++v) {
    if (!in_cycle[v]) {
      to_new[v] = static_cast<int>(to_old.size());
      to_old.push_back(v);
    }
  }
  const int c = static_cast<int>(to_old.size());
  const int reduced = c + 1;
  Eigen::MatrixXd w = Eigen::MatrixXd::Constant(reduced, reduced, kNegInf);
  // Which cycle member an edge into / out of the cycle attaches to.
  std::vector<int> enter_at(reduced, -1);
  std::vector<int> leave_from(reduced, -1);
  for (int u = 0; u < m; ++u) {
    if (in_cycle[u]) continue;
    for (int v = 0; v < m; ++v) {
      if (in_cycle[v] || u == v) continue;
      w(to_new[u], to_new[v]) = weight(u, v);
    }
    // Entering the cycle at v replaces v's cycle arc.
    double best = kNegInf;
    for (int v : cycle) {
      const double score = weight(u, v) - weight(head[v], v) + cycle_score;
      if (score > best || (score == best && v < enter_at[to_new[u]])) {
        best = score;
        enter_at[to_new[u]] = v;
      }
    }
    w(to_new[u], c) = best;
    // Leaving the cycle towards u.
    if (u == 0) continue;
    double best_out = kNegInf;
    for (int v : cycle) {
      if (weight(v, u) > best_out || (weight(v, u) == best_out && v < leave_from[to_new[u]])) {
        best_out = weight(v, u);
        leave_from[to_new[u]] = v;
      }
    }
    w(c, to_new[u]) = best_out;
  }

  const std::vector<int> sub = Edmonds(w);
  std::vector<int> result(m, -1);
  for (int v = 0; v < m; ++v) {
    if (in_cycle[v]) result[v] = head[v];
  }
  for (int nv = 1; nv < reduced; ++nv) {
    const int nh = sub[nv];
    if (nv == c) {
      const int u = to_old[nh];
      result[enter_at[nh]] = u;
    } else {
      result[to_old[nv]] = nh == c ? leave_from[nv] : to_old[nh];
    }
  }
  return result;
}

void CheckScores(const nn::Matrix& scores) {
  if (scores.cols() != scores.rows() + 1) {
    throw InvalidArgument("arc score matrix must be n x (n + 1)");
  }
  if (!scores.allFinite()) throw InvalidArgument("arc scores must be finite");
}

}  // namespace

DecoderKind ParseDecoderKind(std::string_view name) {
  if (name == "cle" || name == "mst") return DecoderKind::kChuLiuEdmonds;
  if (name == "greedy") return DecoderKind::kGreedy;
  throw InvalidArgument("unknown decoder '" + std::string(name) +
                        "' (expected cle or greedy)");
}

std::vector<int> MaxSpanningArborescence(const nn::Matrix& scores) {
  CheckScores(scores);
  const int n = static_cast<int>(scores.rows());
  Eigen::MatrixXd weight = Eigen::MatrixXd::Constant(n + 1, n + 1, kNegInf);
  for (int d = 1; d <= n; ++d) {
    for (int h = 0; h <= n; ++h) {
      if (h != d) weight(h, d) = scores(d - 1, h);
    }
  }
  const std::vector<int> head = Edmonds(weight);
  return {head.begin() + 1, head.end()};
}

std::vector<int> GreedyHeads(const nn::Matrix& scores) {
  CheckScores(scores);
  const int n = static_cast<int>(scores.rows());
  std::vector<int> heads(n, 0);
  for (int d = 1; d <= n; ++d) {
    double best = kNegInf;
    for (int h = 0; h <= n; ++h) {
      if (h != d && scores(d - 1, h) > best) {
        best = scores(d - 1, h);
        heads[d - 1] = h;
      }
    }
  }
  return heads;
}

std::vector<Arc> DecodeTree(const ScoredParse& parse, DecoderKind kind) {
  const std::vector<int> heads = kind == DecoderKind::kChuLiuEdmonds
                                     ? MaxSpanningArborescence(parse.arc_scores)
                                     : GreedyHeads(parse.arc_scores);
  std::vector<Arc> arcs(heads.size());
  for (std::size_t i = 0; i < heads.size(); ++i) {
    arcs[i].head = heads[i];
    if (i < parse.relation_probabilities.size()) {
      Eigen::Index best = 0;
      parse.relation_probabilities[i].row(heads[i]).maxCoeff(&best);
      arcs[i].relation = static_cast<int>(best);
    }
  }
  return arcs;
}

double TreeScore(const nn::Matrix& scores, const std::vector<int>& heads) {
  double total = 0.0;
  for (std::size_t i = 0; i < heads.size(); ++i) {
    total += scores(static_cast<Eigen::Index>(i), heads[i]);
  }
  return total;
}

bool IsSpanningArborescence(const std::vector<int>& heads) {
  const int n = static_cast<int>(heads.size());
  for (int d = 1; d <= n; ++d) {
    const int h = heads[d - 1];
    if (h < 0 || h > n || h == d) return false;
  }
  for (int start = 1; start <= n; ++start) {
    int node = start;
    for (int steps = 0; node != 0; ++steps) {
      if (steps > n) return false;
      node = heads[node - 1];
    }
  }
  return true;
}

}  // namespace tagprobe
