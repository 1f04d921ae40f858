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

// Shared fixtures: the small hand-checked instances and seeded random
// instance generators.

#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "spupack/colgen.hpp"
#include "spupack/core_model.hpp"
#include "spupack/lp_core.hpp"

namespace fixtures {

using namespace spupack;

inline Spu spu(const std::string& id, std::vector<ItemLine> lines, std::string tag = "") {
  Spu s;
  s.id = id;
  s.lines = std::move(lines);
  s.demand_tag = std::move(tag);
  return s;
}

inline Order order(const std::string& id, std::vector<ItemLine> lines, std::string tag = "") {
  Order o;
  o.id = id;
  o.lines = std::move(lines);
  o.demand_tag = std::move(tag);
  return o;
}

// Matching example: only SPU1 is a subset with the same demand tag.
inline Order matching_order() { return order("om", {{"A", 2}, {"B", 4}, {"C", 5}}, "ratio B:A=2"); }
inline HistoryRecord matching_history() {
  HistoryRecord r;
  r.month = "Aug";
  r.spus = {spu("SPU1", {{"A", 1}, {"B", 2}}, "ratio B:A=2"), spu("SPU2", {{"A", 1}, {"D", 2}}, "ratio B:A=2"),
            spu("SPU3", {{"A", 1}, {"B", 3}}, "ratio B:A=3")};
  return r;
}

// Order on which greedy matching takes SPU1 first and then gets stuck,
// while two SPU2 and one SPU3 cover it exactly.
inline Order fail_case_order() { return order("of", {{"A", 2}, {"B", 4}, {"C", 1}}); }
inline std::vector<Spu> fail_case_spus() {
  return {spu("SPU1", {{"A", 2}, {"B", 3}}), spu("SPU2", {{"A", 1}, {"B", 2}}), spu("SPU3", {{"C", 1}})};
}

inline std::string item(std::size_t i) { return std::string(1, static_cast<char>('A' + i)); }

// Feasible RMP-shaped LP: d <= max_rows rows, at most max_cols columns, a
// few unit columns so the rows are always coverable, positive costs and
// rhs = A x for a random integer x.
inline LpProblem random_rmp(std::mt19937_64& rng, std::size_t max_rows, std::size_t max_cols) {
  std::uniform_int_distribution<std::size_t> rows_d(1, max_rows);
  const std::size_t m = rows_d(rng);
  // Leaves room for the repair columns added below.
  std::uniform_int_distribution<std::size_t> cols_d(m, std::max(m, max_cols > m ? max_cols - m : m));
  const std::size_t n = cols_d(rng);
  std::uniform_int_distribution<Quantity> coeff(0, 4);
  std::uniform_int_distribution<int> cost_d(1, 10);
  std::bernoulli_distribution dense(0.4);
  LpProblem lp;
  lp.rhs.assign(m, 0);
  for (std::size_t j = 0; j < n; ++j) {
    SparseColumn col;
    if (j < m && j % 2 == 0) {
      col.push_back({j, 1});
    } else {
      for (std::size_t r = 0; r < m; ++r) {
        if (dense(rng)) {
          const Quantity v = coeff(rng);
          if (v) col.push_back({r, v});
        }
      }
      if (col.empty()) col.push_back({std::uniform_int_distribution<std::size_t>(0, m - 1)(rng), 1});
    }
    lp.columns.push_back(col);
    lp.costs.push_back(static_cast<double>(cost_d(rng)) / 2.0);
  }
  std::uniform_int_distribution<Quantity> x_d(0, 3);
  for (std::size_t j = 0; j < n; ++j) {
    const Quantity x = x_d(rng);
    for (const auto& e : lp.columns[j]) lp.rhs[e.row] += e.value * x;
  }
  // Rows left at zero get one unit more through a column that touches them.
  for (std::size_t r = 0; r < m; ++r) {
    if (lp.rhs[r] > 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      bool touches = false;
      for (const auto& e : lp.columns[j]) touches = touches || e.row == r;
      if (!touches) continue;
      for (const auto& e : lp.columns[j]) lp.rhs[e.row] += e.value;
      break;
    }
    if (lp.rhs[r] == 0) {
      lp.columns.push_back({{r, 1}});
      lp.costs.push_back(1.0);
      lp.rhs[r] = 1;
    }
  }
  return lp;
}

struct IpInstance {
  std::vector<Column> columns;
  ItemCounts rhs;
  std::vector<double> costs;
};

// Random exact-cover instance: up to max_cols columns over up to max_types
// item types with demands in [1, max_demand]. Not always feasible.
inline IpInstance random_ip(std::mt19937_64& rng, std::size_t max_cols, std::size_t max_types, Quantity max_demand,
                            bool integral_costs = true) {
  IpInstance inst;
  const std::size_t d = std::uniform_int_distribution<std::size_t>(1, max_types)(rng);
  for (std::size_t i = 0; i < d; ++i) inst.rhs[item(i)] = std::uniform_int_distribution<Quantity>(1, max_demand)(rng);
  const std::size_t n = std::uniform_int_distribution<std::size_t>(1, max_cols)(rng);
  std::bernoulli_distribution use(0.5);
  for (std::size_t j = 0; j < n; ++j) {
    Column c;
    c.id = "c" + std::to_string(j);
    for (const auto& [t, q] : inst.rhs) {
      if (use(rng)) c.coeffs[t] = std::uniform_int_distribution<Quantity>(1, std::max<Quantity>(1, q))(rng);
    }
    if (c.coeffs.empty()) c.coeffs[inst.rhs.begin()->first] = 1;
    c.cost = integral_costs ? static_cast<double>(std::uniform_int_distribution<int>(1, 3)(rng))
                            : std::uniform_real_distribution<double>(0.5, 3.0)(rng);
    inst.costs.push_back(c.cost);
    inst.columns.push_back(std::move(c));
  }
  return inst;
}

// Small order plus matched SPUs (every SPU fits the order).
struct SmallCase {
  Order order;
  std::vector<Spu> matched;
};

inline SmallCase random_small_case(std::mt19937_64& rng, std::size_t max_types, std::size_t max_spus,
                                   Quantity max_demand) {
  SmallCase sc;
  const auto inst = random_ip(rng, max_spus, max_types, max_demand);
  sc.order.id = "small";
  for (const auto& [t, q] : inst.rhs) sc.order.lines.push_back({t, q});
  for (std::size_t j = 0; j < inst.columns.size(); ++j) {
    Spu s;
    s.id = "s" + std::to_string(100 + j);
    for (const auto& [t, a] : inst.columns[j].coeffs) s.lines.push_back({t, a});
    sc.matched.push_back(std::move(s));
  }
  return sc;
}

}  // namespace fixtures
