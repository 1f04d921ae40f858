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

// Fallback packer for items no historical SPU covers. First-fit-decreasing
// on item counts: item types are taken by remaining count (largest first)
// and poured into units of at most `capacity` items.

#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spupack/core_model.hpp"

namespace spupack {

inline constexpr Quantity kDefaultHeuristicCapacity = 60;

inline std::string heuristic_column_id(std::size_t k) { return "heur:" + std::to_string(k); }

inline std::vector<Column> pack_leftovers(const ItemCounts& leftover, Quantity capacity) {
  if (capacity < 1) throw std::invalid_argument("heuristic capacity must be >= 1");
  std::vector<std::pair<ItemType, Quantity>> order;
  for (const auto& [type, q] : leftover) {
    if (q < 0) throw std::invalid_argument("negative leftover for " + type);
    if (q > 0) order.emplace_back(type, q);
  }
  // Stable on ties so the map order (ascending type) breaks them.
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  std::vector<Column> columns;
  Column current;
  Quantity room = capacity;
  auto flush = [&] {
    if (current.coeffs.empty()) return;
    current.id = heuristic_column_id(columns.size());
    current.cost = 1.0;
    current.provenance = Provenance::kHeuristic;
    columns.push_back(std::move(current));
    current = Column{};
    room = capacity;
  };
  for (auto& [type, remaining] : order) {
    while (remaining > 0) {
      const Quantity take = std::min(room, remaining);
      current.coeffs[type] += take;
      remaining -= take;
      room -= take;
      if (room == 0) flush();
    }
  }
  flush();
  return columns;
}

}  // namespace spupack
