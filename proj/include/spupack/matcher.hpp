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

#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "spupack/core_model.hpp"

namespace spupack {

// Inverted index from item type to the SPUs containing it.
struct HistoryIndex {
  std::map<ItemType, std::set<std::string>> by_item;
  std::map<std::string, Spu> spus;
};

inline HistoryIndex build_index(const HistoryRecord& record) {
  HistoryIndex index;
  for (const auto& spu : record.spus) {
    if (!index.spus.emplace(spu.id, spu).second) {
      throw std::invalid_argument("duplicate spu id " + spu.id);
    }
    for (const auto& line : spu.lines) index.by_item[line.item_type].insert(spu.id);
  }
  return index;
}

// True iff every item of `spu` is demanded by the order in at least the
// same quantity, and the demand tags agree (unless relaxed).
inline bool is_matched(const Spu& spu, const ItemCounts& demand, const std::string& demand_tag,
                       bool relax_demand) {
  if (!relax_demand && spu.demand_tag != demand_tag) return false;
  for (const auto& line : spu.lines) {
    const auto it = demand.find(line.item_type);
    if (it == demand.end() || it->second < line.quantity) return false;
  }
  return true;
}

// All matched SPUs of `order`, ascending by SPU id.
inline std::vector<Spu> matched_spus(const Order& order, const HistoryIndex& index,
                                     bool relax_demand) {
  const ItemCounts demand = demand_of(order);
  std::set<std::string> candidates;
  for (const auto& [type, q] : demand) {
    const auto it = index.by_item.find(type);
    if (it != index.by_item.end()) candidates.insert(it->second.begin(), it->second.end());
  }
  std::vector<Spu> out;
  for (const auto& id : candidates) {
    const Spu& spu = index.spus.at(id);
    if (is_matched(spu, demand, order.demand_tag, relax_demand)) out.push_back(spu);
  }
  return out;
}

}  // namespace spupack
