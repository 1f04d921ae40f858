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

// Domain types for order packing over historical packed units (SPUs).
//
// An Order asks for exact quantities of a few item types. A historical Spu is
// a multiset of items that was feasibly packed once; it becomes a Column of
// the set-cover master problem. A Solution assigns integer multiplicities to
// columns such that every demanded quantity is met exactly.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace spupack {

using ItemType = std::string;
using Quantity = std::int64_t;
using ItemCounts = std::map<ItemType, Quantity>;

// Feasibility tolerance on LP equalities and reduced-cost tests.
inline constexpr double kEpsilon = 1e-9;

struct ItemLine {
  ItemType item_type;
  Quantity quantity = 0;

  friend bool operator==(const ItemLine&, const ItemLine&) = default;
};

struct Order {
  std::string id;
  std::vector<ItemLine> lines;
  // Opaque customer demand; empty means no special demand.
  std::string demand_tag;

  friend bool operator==(const Order&, const Order&) = default;
};

struct Spu {
  std::string id;
  std::vector<ItemLine> lines;
  double cost = 1.0;
  std::string demand_tag;
  std::optional<std::string> source_month;

  friend bool operator==(const Spu&, const Spu&) = default;
};

struct HistoryRecord {
  std::string month;
  std::vector<Spu> spus;

  friend bool operator==(const HistoryRecord&, const HistoryRecord&) = default;
};

enum class Provenance { kMatchedHistory, kHeuristic, kArtificialSlack };

struct Column {
  std::string id;
  std::optional<std::string> spu_ref;
  ItemCounts coeffs;
  double cost = 1.0;
  Provenance provenance = Provenance::kMatchedHistory;

  Quantity total_items() const {
    Quantity total = 0;
    for (const auto& [type, q] : coeffs) total += q;
    return total;
  }

  friend bool operator==(const Column&, const Column&) = default;
};

enum class SolveStatus { kOptimal, kFeasible, kInfeasible, kIterationLimit };

struct Solution {
  // Every column referenced by column_counts, keyed by column id.
  std::map<std::string, Column> columns;
  std::map<std::string, Quantity> column_counts;
  // Items not covered by history columns (delivered by heuristic or
  // artificial columns instead).
  ItemCounts heuristic_slack;
  double objective = 0.0;
  SolveStatus status = SolveStatus::kInfeasible;

  friend bool operator==(const Solution&, const Solution&) = default;
};

inline ItemCounts demand_of(const Order& order) {
  ItemCounts demand;
  for (const auto& line : order.lines) demand[line.item_type] += line.quantity;
  return demand;
}

inline ItemCounts counts_of(const std::vector<ItemLine>& lines) {
  ItemCounts counts;
  for (const auto& line : lines) counts[line.item_type] += line.quantity;
  return counts;
}

inline Column column_from_spu(const Spu& spu) {
  Column column;
  column.id = spu.id;
  column.spu_ref = spu.id;
  column.coeffs = counts_of(spu.lines);
  column.cost = spu.cost;
  column.provenance = Provenance::kMatchedHistory;
  return column;
}

// Number of SPUs in the plan, history and heuristic alike. Artificial slack
// columns are not packed units and do not count.
inline Quantity units_used(const Solution& solution) {
  Quantity units = 0;
  for (const auto& [id, count] : solution.column_counts) {
    const auto it = solution.columns.find(id);
    if (it != solution.columns.end() &&
        it->second.provenance == Provenance::kArtificialSlack) {
      continue;
    }
    units += count;
  }
  return units;
}

inline Quantity total_slack(const Solution& solution) {
  Quantity total = 0;
  for (const auto& [type, q] : solution.heuristic_slack) total += q;
  return total;
}

namespace detail {

inline void check_lines(const std::vector<ItemLine>& lines, std::vector<std::string>& out) {
  std::set<ItemType> seen;
  for (const auto& line : lines) {
    if (line.item_type.empty()) out.emplace_back("item_type nonempty");
    if (line.quantity < 1) out.emplace_back("quantity >= 1 (item " + line.item_type + ")");
    if (!seen.insert(line.item_type).second) {
      out.emplace_back("duplicate item_type " + line.item_type);
    }
  }
}

}  // namespace detail

// Returns every invariant violation; empty iff the order is valid.
inline std::vector<std::string> validate_order(const Order& order) {
  std::vector<std::string> violations;
  if (order.lines.empty()) violations.emplace_back("order has no lines");
  detail::check_lines(order.lines, violations);
  return violations;
}

inline std::vector<std::string> validate_spu(const Spu& spu) {
  std::vector<std::string> violations;
  if (spu.lines.empty()) violations.emplace_back("spu has no lines");
  detail::check_lines(spu.lines, violations);
  if (!(spu.cost > 0.0)) violations.emplace_back("cost > 0");
  return violations;
}

inline std::vector<std::string> validate_record(const HistoryRecord& record) {
  std::vector<std::string> violations;
  std::set<std::string> ids;
  for (const auto& spu : record.spus) {
    if (!ids.insert(spu.id).second) violations.emplace_back("duplicate spu id " + spu.id);
    for (auto& v : validate_spu(spu)) violations.emplace_back(spu.id + ": " + v);
  }
  return violations;
}

// Checks sum_i coeffs_ji * count_i + slack_j == q_j for every order item,
// where i ranges over history columns, and that the non-history columns
// deliver exactly the slack. Integer arithmetic only.
inline std::vector<std::string> check_exact_cover(const Order& order, const Solution& solution) {
  std::vector<std::string> violations;
  const ItemCounts demand = demand_of(order);
  ItemCounts history_cover;
  ItemCounts fallback_cover;
  for (const auto& [id, count] : solution.column_counts) {
    if (count < 0) violations.emplace_back("negative count for " + id);
    const auto it = solution.columns.find(id);
    if (it == solution.columns.end()) {
      violations.emplace_back("unknown column " + id);
      continue;
    }
    auto& target = it->second.provenance == Provenance::kMatchedHistory ? history_cover
                                                                        : fallback_cover;
    for (const auto& [type, coeff] : it->second.coeffs) {
      if (!demand.contains(type)) violations.emplace_back("column " + id + " covers foreign item " + type);
      target[type] += coeff * count;
    }
  }
  for (const auto& [type, q] : solution.heuristic_slack) {
    if (q < 0) violations.emplace_back("negative slack for " + type);
    if (!demand.contains(type)) violations.emplace_back("slack on foreign item " + type);
  }
  auto get = [](const ItemCounts& m, const ItemType& t) -> Quantity {
    const auto it = m.find(t);
    return it == m.end() ? 0 : it->second;
  };
  for (const auto& [type, q] : demand) {
    const Quantity slack = get(solution.heuristic_slack, type);
    if (get(history_cover, type) + slack != q) {
      violations.emplace_back("item " + type + " not covered exactly");
    }
    if (get(fallback_cover, type) != slack) {
      violations.emplace_back("fallback columns do not deliver slack of " + type);
    }
  }
  return violations;
}

inline std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::kMatchedHistory: return "matched-history";
    case Provenance::kHeuristic: return "heuristic";
    case Provenance::kArtificialSlack: return "artificial-slack";
  }
  return "unknown";
}

inline std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kFeasible: return "feasible";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kIterationLimit: return "iteration-limit";
  }
  return "unknown";
}

}  // namespace spupack
