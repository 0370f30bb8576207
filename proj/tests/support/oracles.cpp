// Copyright 2026 The litscreen Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "oracles.hpp"

#include <algorithm>
#include <numeric>

namespace litscreen::testing {

double auc_pairs(const std::vector<ScoredRecord>& records) {
  double concordant = 0;
  double pairs = 0;
  for (const auto& p : records) {
    if (p.label != 1) continue;
    for (const auto& n : records) {
      if (n.label != 0) continue;
      pairs += 1;
      if (p.score > n.score) concordant += 1;
      else if (p.score == n.score) concordant += 0.5;
    }
  }
  return concordant / pairs;
}

double acc_bot50_sorted(const std::vector<ScoredRecord>& records) {
  std::vector<ScoredRecord> sorted = records;
  std::sort(sorted.begin(), sorted.end(), [](const ScoredRecord& a, const ScoredRecord& b) {
    if (a.score != b.score) return a.score < b.score;
    return a.index > b.index;
  });
  const std::size_t k = sorted.size() / 2;
  std::size_t negatives = 0;
  for (std::size_t i = 0; i < k; ++i) negatives += sorted[i].label == 0;
  return static_cast<double>(negatives) / static_cast<double>(k);
}

std::size_t levenshtein_table(const std::u32string& a, const std::u32string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i)
    for (std::size_t j = 1; j <= b.size(); ++j)
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
  return d[a.size()][b.size()];
}

double jaro_reference(const std::u32string& a, const std::u32string& b) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  const std::size_t longer = std::max(a.size(), b.size());
  const std::size_t window = longer / 2 >= 1 ? longer / 2 - 1 : 0;
  std::vector<bool> used_a(a.size()), used_b(b.size());
  std::size_t m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::size_t lo = i > window ? i - window : 0;
    const std::size_t hi = std::min(b.size(), i + window + 1);
    for (std::size_t j = lo; j < hi; ++j) {
      if (!used_b[j] && a[i] == b[j]) {
        used_a[i] = used_b[j] = true;
        ++m;
        break;
      }
    }
  }
  if (m == 0) return 0.0;
  std::u32string sa, sb;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (used_a[i]) sa.push_back(a[i]);
  for (std::size_t j = 0; j < b.size(); ++j)
    if (used_b[j]) sb.push_back(b[j]);
  std::size_t half_transpositions = 0;
  for (std::size_t k = 0; k < m; ++k) half_transpositions += sa[k] != sb[k];
  const double t = static_cast<double>(half_transpositions) / 2.0;
  const double md = static_cast<double>(m);
  return (md / static_cast<double>(a.size()) + md / static_cast<double>(b.size()) + (md - t) / md) / 3.0;
}

}  // namespace litscreen::testing
