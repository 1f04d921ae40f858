// Copyright 2026 The spupack Authors
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

// Greedy fuzzy-match baseline: repeatedly take the locally best matched SPU
// that still fits the remaining quantities, until nothing remains (success)
// or nothing fits (failure).
//
// Local best: most items covered, then fewest distinct item types left
// afterwards, then lowest SPU id.

#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spupack/core_model.hpp"

namespace spupack {

struct FuzzyResult {
  bool success = false;
  // Selected SPU ids in selection order (repeats allowed).
  std::vector<std::string> picks;
  ItemCounts remaining;
  // Present iff success.
  std::optional<Solution> solution;
};

inline FuzzyResult fuzzy_match_solve(const Order& order, std::span<const Spu> matched) {
  FuzzyResult r;
  r.remaining = demand_of(order);
  std::vector<ItemCounts> spu_counts;
  spu_counts.reserve(matched.size());
  for (const auto& s : matched) spu_counts.push_back(counts_of(s.lines));

  Quantity left = 0;
  for (const auto& [t, q] : r.remaining) left += q;
  std::size_t types_left = 0;
  for (const auto& [t, q] : r.remaining) types_left += q > 0 ? 1 : 0;

  std::map<std::string, Quantity> counts;
  while (left > 0) {
    std::optional<std::size_t> best;
    Quantity best_cover = 0;
    std::size_t best_types = 0;
    for (std::size_t i = 0; i < matched.size(); ++i) {
      Quantity cover = 0;
      std::size_t closed = 0;
      bool fits = true;
      for (const auto& [t, q] : spu_counts[i]) {
        const auto it = r.remaining.find(t);
        if (it == r.remaining.end() || it->second < q) {
          fits = false;
          break;
        }
        cover += q;
        if (q > 0 && it->second == q) ++closed;
      }
      if (!fits || cover == 0) continue;
      const std::size_t after = types_left - closed;
      const bool better = !best || cover > best_cover ||
                          (cover == best_cover && after < best_types) ||
                          (cover == best_cover && after == best_types && matched[i].id < matched[*best].id);
      if (better) {
        best = i;
        best_cover = cover;
        best_types = after;
      }
    }
    if (!best) return r;
    for (const auto& [t, q] : spu_counts[*best]) r.remaining[t] -= q;
    left -= best_cover;
    types_left = best_types;
    r.picks.push_back(matched[*best].id);
    ++counts[matched[*best].id];
  }

  r.success = true;
  Solution s;
  for (const auto& [id, count] : counts) {
    for (const auto& spu : matched) {
      if (spu.id == id) {
        s.columns[id] = column_from_spu(spu);
        s.objective += spu.cost * static_cast<double>(count);
        break;
      }
    }
    s.column_counts[id] = count;
  }
  s.status = SolveStatus::kFeasible;
  r.solution = std::move(s);
  return r;
}

}  // namespace spupack
