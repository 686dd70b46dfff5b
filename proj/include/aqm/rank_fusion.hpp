/*
 * Copyright 2026 The Archive Query Miner Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "aqm/strings.hpp"

namespace aqm {

class RankingError : public std::runtime_error {
 public:
  explicit RankingError(const std::string& what) : std::runtime_error(what) {}
};

/// One dated popularity-ranking snapshot: (domain, 1-based rank) pairs with
/// strictly increasing ranks starting at 1 and unique domains.
struct RankSnapshot {
  std::string snapshot_id;
  std::vector<std::pair<std::string, uint32_t>> ranking;

  void validate() const {
    uint32_t prev = 0;
    std::set<std::string_view> seen;
    for (size_t i = 0; i < ranking.size(); ++i) {
      const auto& [domain, rank] = ranking[i];
      if (i == 0 && rank != 1)
        throw RankingError("snapshot " + snapshot_id + ": ranks must start at 1");
      if (rank <= prev)
        throw RankingError("snapshot " + snapshot_id + ": ranks must be strictly increasing");
      if (!seen.insert(domain).second)
        throw RankingError("snapshot " + snapshot_id + ": duplicate domain " + domain);
      prev = rank;
    }
  }
};

/// Reads one snapshot from lines of "rank,domain" (1-based, ascending) —
/// the popularity-CSV convention.
inline RankSnapshot load_rank_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RankingError("cannot open rank snapshot: " + path.string());
  RankSnapshot snap;
  snap.snapshot_id = path.stem().string();
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    size_t comma = line.find(',');
    if (comma == std::string::npos)
      throw RankingError(path.string() + ":" + std::to_string(lineno) +
                         ": expected 'rank,domain'");
    uint32_t rank = 0;
    for (char c : line.substr(0, comma)) {
      if (c < '0' || c > '9')
        throw RankingError(path.string() + ":" + std::to_string(lineno) + ": bad rank");
      rank = rank * 10 + static_cast<uint32_t>(c - '0');
    }
    snap.ranking.emplace_back(line.substr(comma + 1), rank);
  }
  snap.validate();
  return snap;
}

/**
 * Reciprocal rank fusion over popularity snapshots. Each snapshot is
 * truncated to its top-`cutoff` entries; a domain then scores
 * sum over snapshots of 1/(k + rank). Output is sorted by descending score
 * with lexicographic tie-break, so fusion is deterministic and
 * permutation-invariant in snapshot order.
 */
inline std::vector<std::pair<std::string, double>> fuse_rankings(
    const std::vector<RankSnapshot>& snapshots, size_t cutoff, double k) {
  if (snapshots.empty()) throw RankingError("fuse_rankings needs at least one snapshot");
  if (cutoff < 1) throw RankingError("cutoff must be at least 1");
  if (!(k > 0)) throw RankingError("k must be positive");
  std::map<std::string, double> score;
  for (const auto& snap : snapshots) {
    size_t n = std::min(cutoff, snap.ranking.size());
    for (size_t i = 0; i < n; ++i) {
      const auto& [domain, rank] = snap.ranking[i];
      score[domain] += 1.0 / (k + static_cast<double>(rank));
    }
  }
  std::vector<std::pair<std::string, double>> out(score.begin(), score.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

}  // namespace aqm
