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

// Branch-and-bound over a fixed column set for the exact-cover program
//
//   min sum_i cost_i x_i   s.t.  sum_i A_ji x_i = q_j,  x_i in Z_{>=0}.
//
// Nodes carry per-column [lower, upper] bounds. A node LP shifts out the
// lower bounds (rhs -= A * lower), drops rows that reach zero together with
// the columns touching them, and models a binding upper bound as an extra
// equality row with a zero-cost slack. Search is best-first on the LP bound
// with bounded plunging (dive into the better child, queue the sibling) and
// branches on the most fractional variable. Every solved node also runs a
// round-and-repair heuristic for incumbents.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "spupack/core_model.hpp"
#include "spupack/lp_core.hpp"

namespace spupack {

struct IpOptions {
  std::size_t node_limit = 100000;
};

struct IpResult {
  Solution solution;
  std::size_t nodes = 0;     // node LPs solved, root included
  std::size_t branches = 0;  // nodes split into two children
  double root_bound = 0.0;
  bool proven = false;
};

namespace detail {

class BranchAndBound {
 public:
  BranchAndBound(const std::vector<Column>& columns, const ItemCounts& rhs,
                 const std::vector<double>& costs, const IpOptions& options)
      : columns_(columns), costs_(costs), options_(options) {
    if (costs.size() != columns.size()) throw std::invalid_argument("ip: costs/columns size mismatch");
    std::map<ItemType, std::size_t> row_of;
    for (const auto& [type, q] : rhs) {
      if (q < 0) throw std::invalid_argument("ip: negative demand for " + type);
      row_of.emplace(type, rhs_.size());
      rhs_.push_back(q);
    }
    dense_.resize(columns.size());
    integral_costs_ = true;
    for (std::size_t j = 0; j < columns.size(); ++j) {
      for (const auto& [type, coeff] : columns[j].coeffs) {
        if (coeff == 0) continue;
        const auto it = row_of.find(type);
        if (it == row_of.end()) throw std::invalid_argument("ip: column " + columns[j].id + " covers unknown item " + type);
        if (coeff < 0) throw std::invalid_argument("ip: negative coefficient in " + columns[j].id);
        dense_[j].push_back({it->second, coeff});
      }
      if (costs[j] != std::floor(costs[j])) integral_costs_ = false;
    }
    std::vector<double> per_item(columns.size(), std::numeric_limits<double>::infinity());
    for (std::size_t j = 0; j < columns.size(); ++j) {
      Quantity items = 0;
      for (const auto& e : dense_[j]) items += e.value;
      if (items > 0) {
        per_item[j] = costs[j] / static_cast<double>(items);
        cheap_order_.push_back(j);
      }
    }
    // Cheapest per item first.
    std::stable_sort(cheap_order_.begin(), cheap_order_.end(), [&](std::size_t a, std::size_t b) {
      return per_item[a] < per_item[b];
    });
  }

  IpResult run(const std::optional<std::vector<Quantity>>& incumbent) {
    IpResult result;
    const std::size_t n = columns_.size();
    if (incumbent) consider(*incumbent);

    Node root;
    root.lower.assign(n, 0);
    root.upper.resize(n);
    for (std::size_t j = 0; j < n; ++j) root.upper[j] = natural_bound(j, rhs_);
    if (!solve_node(root)) {
      result.nodes = nodes_;
      result.proven = true;
      result.root_bound = std::numeric_limits<double>::infinity();
      return finish(result, true);
    }
    result.root_bound = root.bound;
    repair(root);
    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    open.push(std::move(root));
    bool exhausted = true;
    while (!open.empty() && exhausted) {
      Node node = open.top();
      open.pop();
      // Plunge: keep diving into the better child; its sibling is queued.
      for (std::size_t depth = 0; depth <= kMaxPlunge; ++depth) {
        if (pruned(node.bound)) break;
        const std::optional<std::size_t> branch_var = most_fractional(node);
        if (!branch_var) {
          consider(rounded(node));
          break;
        }
        if (nodes_ + 2 > options_.node_limit) {
          exhausted = false;
          open.push(std::move(node));
          break;
        }
        ++branches_;
        const std::size_t j = *branch_var;
        const double v = node.x[j];
        Node down = node;
        down.upper[j] = static_cast<Quantity>(std::floor(v));
        Node up = std::move(node);
        up.lower[j] = static_cast<Quantity>(std::ceil(v));
        std::vector<Node> alive;
        for (Node* child : {&up, &down}) {
          if (solve_node(*child) && !pruned(child->bound)) {
            repair(*child);
            child->seq = seq_++;
            alive.push_back(std::move(*child));
          }
        }
        if (alive.empty()) break;
        std::size_t keep = 0;
        if (alive.size() == 2 && alive[1].bound < alive[0].bound - kEpsilon) keep = 1;
        for (std::size_t k = 0; k < alive.size(); ++k) {
          if (k != keep) open.push(std::move(alive[k]));
        }
        if (depth == kMaxPlunge) {
          open.push(std::move(alive[keep]));
          break;
        }
        node = std::move(alive[keep]);
      }
    }
    result.nodes = nodes_;
    result.branches = branches_;
    result.proven = exhausted;
    return finish(result, exhausted);
  }

 private:
  struct Node {
    std::vector<Quantity> lower;
    std::vector<Quantity> upper;
    std::vector<double> x;  // full column values (lower included)
    double bound = 0.0;
    std::size_t seq = 0;
  };
  struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
      if (a.bound != b.bound) return a.bound > b.bound;
      return a.seq > b.seq;
    }
  };

  Quantity natural_bound(std::size_t j, const std::vector<Quantity>& rhs) const {
    Quantity bound = std::numeric_limits<Quantity>::max();
    for (const auto& e : dense_[j]) bound = std::min(bound, rhs[e.row] / e.value);
    // Columns without coefficients contribute nothing; fix them at zero.
    return dense_[j].empty() ? 0 : bound;
  }

  bool pruned(double bound) const {
    if (!best_) return false;
    double b = bound;
    if (integral_costs_) b = std::ceil(bound - 1e-6);
    return b >= best_objective_ - kEpsilon;
  }

  // Solves the LP relaxation of `node`; false if infeasible.
  bool solve_node(Node& node) {
    ++nodes_;
    const std::size_t n = columns_.size();
    std::vector<Quantity> residual = rhs_;
    double base = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (node.lower[j] > node.upper[j]) return false;
      if (node.lower[j] == 0) continue;
      base += costs_[j] * static_cast<double>(node.lower[j]);
      for (const auto& e : dense_[j]) residual[e.row] -= e.value * node.lower[j];
    }
    for (const auto r : residual) {
      if (r < 0) return false;
    }
    std::vector<std::size_t> row_map(residual.size(), kNone);
    LpProblem lp;
    for (std::size_t r = 0; r < residual.size(); ++r) {
      if (residual[r] > 0) {
        row_map[r] = lp.rhs.size();
        lp.rhs.push_back(residual[r]);
      }
    }
    std::vector<std::size_t> lp_col_of(n, kNone);
    std::vector<std::size_t> structural;
    for (std::size_t j = 0; j < n; ++j) {
      const Quantity room = node.upper[j] - node.lower[j];
      if (room <= 0 || dense_[j].empty()) continue;
      bool usable = true;
      for (const auto& e : dense_[j]) usable = usable && row_map[e.row] != kNone;
      if (!usable) continue;
      if (natural_bound(j, residual) == 0) continue;
      SparseColumn col;
      for (const auto& e : dense_[j]) col.push_back({row_map[e.row], e.value});
      // The rows only imply x_j <= min residual/a, which may be fractional,
      // so the bound row is redundant only if some row alone enforces it.
      bool implied = false;
      for (const auto& e : dense_[j]) implied = implied || room * e.value >= residual[e.row];
      if (!implied) {
        col.push_back({lp.rhs.size(), 1});
        lp.rhs.push_back(room);
        lp.columns.push_back({{lp.rhs.size() - 1, 1}});
        lp.costs.push_back(0.0);
        structural.push_back(kNone);
      }
      lp_col_of[j] = lp.columns.size();
      lp.columns.push_back(std::move(col));
      lp.costs.push_back(costs_[j]);
      structural.push_back(j);
    }
    node.x.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) node.x[j] = static_cast<double>(node.lower[j]);
    if (lp.rhs.empty()) {
      node.bound = base;
      return true;
    }
    const LpResult sol = solve_lp(lp);
    if (sol.status != LpStatus::kOptimal) return false;
    for (std::size_t j = 0; j < n; ++j) {
      if (lp_col_of[j] != kNone) node.x[j] += sol.primal[lp_col_of[j]];
    }
    node.bound = base + sol.objective;
    return true;
  }

  std::optional<std::size_t> most_fractional(const Node& node) const {
    std::optional<std::size_t> pick;
    double best = 1e-6;
    for (std::size_t j = 0; j < node.x.size(); ++j) {
      const double f = node.x[j] - std::floor(node.x[j]);
      const double dist = std::min(f, 1.0 - f);
      if (dist > best) {
        best = dist;
        pick = j;
      }
    }
    return pick;
  }

  // Primal heuristic: round the LP point down, then complete the residual
  // demand greedily, first with the columns that had the largest fractional
  // parts, then with the cheapest columns per item. Any exact cover found is
  // a valid incumbent regardless of the node's bounds.
  void repair(const Node& node) {
    const std::size_t n = columns_.size();
    std::vector<Quantity> counts(n);
    std::vector<Quantity> residual = rhs_;
    std::vector<double> frac(n);
    for (std::size_t j = 0; j < n; ++j) {
      counts[j] = static_cast<Quantity>(std::floor(node.x[j] + 1e-9));
      frac[j] = node.x[j] - static_cast<double>(counts[j]);
      for (const auto& e : dense_[j]) residual[e.row] -= e.value * counts[j];
    }
    for (const auto r : residual) {
      if (r < 0) return;
    }
    auto fits = [&](std::size_t j) {
      if (dense_[j].empty()) return false;
      for (const auto& e : dense_[j]) {
        if (residual[e.row] < e.value) return false;
      }
      return true;
    };
    auto take = [&](std::size_t j) {
      ++counts[j];
      for (const auto& e : dense_[j]) residual[e.row] -= e.value;
    };
    std::vector<std::size_t> by_frac;
    for (std::size_t j = 0; j < n; ++j) {
      if (frac[j] > 1e-6) by_frac.push_back(j);
    }
    std::stable_sort(by_frac.begin(), by_frac.end(),
                     [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
    for (const std::size_t j : by_frac) {
      if (fits(j)) take(j);
    }
    for (const std::size_t j : cheap_order_) {
      while (fits(j)) take(j);
    }
    for (const auto r : residual) {
      if (r != 0) return;
    }
    consider(counts);
  }

  static std::vector<Quantity> rounded(const Node& node) {
    std::vector<Quantity> counts(node.x.size());
    for (std::size_t j = 0; j < counts.size(); ++j) counts[j] = std::llround(node.x[j]);
    return counts;
  }

  void consider(const std::vector<Quantity>& counts) {
    if (counts.size() != columns_.size()) throw std::invalid_argument("ip: incumbent size mismatch");
    std::vector<Quantity> cover(rhs_.size(), 0);
    double objective = 0.0;
    for (std::size_t j = 0; j < counts.size(); ++j) {
      if (counts[j] < 0) return;
      objective += costs_[j] * static_cast<double>(counts[j]);
      for (const auto& e : dense_[j]) cover[e.row] += e.value * counts[j];
    }
    if (cover != rhs_) return;
    if (!best_ || objective < best_objective_ - kEpsilon) {
      best_ = counts;
      best_objective_ = objective;
    }
  }

  IpResult& finish(IpResult& result, bool exhausted) {
    Solution& s = result.solution;
    if (!best_) {
      s.status = exhausted ? SolveStatus::kInfeasible : SolveStatus::kIterationLimit;
      return result;
    }
    s.status = exhausted ? SolveStatus::kOptimal : SolveStatus::kIterationLimit;
    s.objective = best_objective_;
    for (std::size_t j = 0; j < columns_.size(); ++j) {
      const Quantity count = (*best_)[j];
      if (count == 0) continue;
      const Column& col = columns_[j];
      s.columns[col.id] = col;
      s.column_counts[col.id] += count;
      if (col.provenance != Provenance::kMatchedHistory) {
        for (const auto& [type, coeff] : col.coeffs) {
          if (coeff != 0) s.heuristic_slack[type] += coeff * count;
        }
      }
    }
    return result;
  }

  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  static constexpr std::size_t kMaxPlunge = 32;

  struct Entry {
    std::size_t row;
    Quantity value;
  };

  const std::vector<Column>& columns_;
  const std::vector<double>& costs_;
  IpOptions options_;
  std::vector<Quantity> rhs_;
  std::vector<std::vector<Entry>> dense_;
  std::vector<std::size_t> cheap_order_;
  bool integral_costs_ = true;
  std::optional<std::vector<Quantity>> best_;
  double best_objective_ = std::numeric_limits<double>::infinity();
  std::size_t nodes_ = 0;
  std::size_t branches_ = 0;
  std::size_t seq_ = 1;
};

}  // namespace detail

// Optimal integer multiplicities over a fixed column set. Column ids must be
// unique. `incumbent`, when given, is a known feasible count vector.
inline IpResult solve_ip(const std::vector<Column>& columns, const ItemCounts& rhs,
                         const std::vector<double>& costs, const IpOptions& options = {},
                         const std::optional<std::vector<Quantity>>& incumbent = std::nullopt) {
  return detail::BranchAndBound(columns, rhs, costs, options).run(incumbent);
}

inline IpResult solve_ip(const std::vector<Column>& columns, const ItemCounts& rhs,
                         const IpOptions& options = {}) {
  std::vector<double> costs;
  costs.reserve(columns.size());
  for (const auto& c : columns) costs.push_back(c.cost);
  return solve_ip(columns, rhs, costs, options);
}

}  // namespace spupack
