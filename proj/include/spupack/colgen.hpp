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

// Column generation over historical SPUs.
//
// 1. Warm start: sample some matched SPUs and solve the integer program that
//    minimizes the number of items left uncovered (mu). Leftovers are packed
//    by the fallback heuristic, or, in pure set-cover mode, carried by
//    artificial slack columns with a prohibitive cost.
// 2. The restricted master problem (RMP) starts from the warm-start plan.
//    Each iteration solves the RMP LP, prices every matched SPU not yet in
//    the RMP by its reduced cost c - sum_j a_j pi_j, and admits the most
//    negative one. Pricing is a linear scan; no packing subproblem is solved
//    because historical SPUs are known to be physically packable.
// 3. When no candidate prices out, the integer program over the RMP columns
//    is solved by branch-and-bound.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spupack/core_model.hpp"
#include "spupack/heuristic_packer.hpp"
#include "spupack/integer_program.hpp"
#include "spupack/lp_core.hpp"

namespace spupack {

using Duals = std::map<ItemType, double>;

struct ColGenConfig {
  std::size_t max_iters = 500;
  double epsilon = kEpsilon;
  std::size_t warm_start_size = 30;
  Quantity heuristic_capacity = kDefaultHeuristicCapacity;
  bool relax_demand = false;
  std::uint64_t rng_seed = 0;
  // false selects pure set-cover mode: no fallback packing, leftovers are
  // priced by artificial slack columns and the order fails unless mu = 0.
  bool heuristic_fallback = true;
  std::size_t columns_per_iteration = 1;
  std::size_t node_limit = 100000;
  // The warm start only needs a good incumbent quickly; proving minimum
  // leftover on dense samples can take far longer than the CG itself.
  std::size_t warm_start_node_limit = 5000;
  bool keep_sampled_columns = true;
};

inline std::vector<std::string> validate_config(const ColGenConfig& c) {
  std::vector<std::string> v;
  if (c.heuristic_capacity < 1) v.emplace_back("heuristic_capacity >= 1");
  if (c.columns_per_iteration < 1) v.emplace_back("columns_per_iteration >= 1");
  if (!(c.epsilon > 0.0)) v.emplace_back("epsilon > 0");
  if (c.node_limit < 1) v.emplace_back("node_limit >= 1");
  if (c.warm_start_node_limit < 1) v.emplace_back("warm_start_node_limit >= 1");
  return v;
}

inline std::string slack_column_id(const ItemType& type) { return "slack:" + type; }

// Per-item cost of an artificial slack column. Any exact cover built from
// columns costing at most `max_cost` uses at most sum(q) columns, so one
// uncovered item always costs more than such a cover.
inline double artificial_cost(const ItemCounts& demand, double max_cost) {
  Quantity total = 0;
  for (const auto& [t, q] : demand) total += q;
  return static_cast<double>(total) * std::max(1.0, max_cost) + 1.0;
}

inline Column make_slack_column(const ItemType& type, double cost) {
  Column c;
  c.id = slack_column_id(type);
  c.coeffs[type] = 1;
  c.cost = cost;
  c.provenance = Provenance::kArtificialSlack;
  return c;
}

// Per-order stream seed: independent of the order's position in a file.
inline std::uint64_t order_seed(std::uint64_t seed, const std::string& order_id) {
  std::uint64_t h = 1469598103934665603ULL ^ seed;
  for (const unsigned char ch : order_id) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

inline double reduced_cost(const Column& column, const Duals& duals) {
  double delta = column.cost;
  for (const auto& [type, coeff] : column.coeffs) {
    delta -= static_cast<double>(coeff) * duals.at(type);
  }
  return delta;
}

struct PricedColumn {
  std::size_t index = 0;  // position in the candidate list
  std::string id;
  double delta = 0.0;
};

// The candidate with minimum reduced cost (ties: lowest id) if that minimum
// is below -epsilon; nullopt signals that column generation has converged.
inline std::optional<PricedColumn> price_from_history(std::span<const Column> candidates,
                                                      const Duals& duals,
                                                      double epsilon = kEpsilon) {
  std::optional<PricedColumn> best;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double delta = reduced_cost(candidates[i], duals);
    if (!best || delta < best->delta || (delta == best->delta && candidates[i].id < best->id)) {
      best = PricedColumn{i, candidates[i].id, delta};
    }
  }
  if (!best || !(best->delta < -epsilon)) return std::nullopt;
  return best;
}

// Up to `k` candidates with negative reduced cost, best first.
inline std::vector<PricedColumn> price_top(std::span<const Column> candidates, const Duals& duals,
                                           std::size_t k, double epsilon = kEpsilon) {
  std::vector<PricedColumn> priced;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double delta = reduced_cost(candidates[i], duals);
    if (delta < -epsilon) priced.push_back({i, candidates[i].id, delta});
  }
  std::sort(priced.begin(), priced.end(), [](const PricedColumn& a, const PricedColumn& b) {
    return a.delta != b.delta ? a.delta < b.delta : a.id < b.id;
  });
  if (priced.size() > k) priced.resize(k);
  return priced;
}

struct WarmStart {
  Solution solution;
  // Optimal value of the leftover-minimizing program: sum of mu_j.
  Quantity leftover = 0;
  std::vector<std::string> sampled_ids;
  bool proven = false;
  std::size_t ip_nodes = 0;
};

inline WarmStart warm_start(const Order& order, std::span<const Spu> matched,
                            const ColGenConfig& config) {
  const ItemCounts demand = demand_of(order);
  WarmStart ws;

  std::vector<std::size_t> pick(matched.size());
  for (std::size_t i = 0; i < pick.size(); ++i) pick[i] = i;
  if (pick.size() > config.warm_start_size) {
    std::mt19937_64 rng(config.rng_seed);
    for (std::size_t i = 0; i < config.warm_start_size; ++i) {
      std::uniform_int_distribution<std::size_t> dist(i, pick.size() - 1);
      std::swap(pick[i], pick[dist(rng)]);
    }
    pick.resize(config.warm_start_size);
  }
  std::sort(pick.begin(), pick.end(),
            [&](std::size_t a, std::size_t b) { return matched[a].id < matched[b].id; });

  std::vector<Column> columns;
  std::vector<double> costs;
  for (const std::size_t i : pick) {
    columns.push_back(column_from_spu(matched[i]));
    costs.push_back(0.0);
    ws.sampled_ids.push_back(matched[i].id);
  }
  const std::size_t first_mu = columns.size();
  for (const auto& [type, q] : demand) {
    columns.push_back(make_slack_column(type, 1.0));
    costs.push_back(1.0);
  }
  std::vector<Quantity> all_leftover(columns.size(), 0);
  {
    std::size_t k = first_mu;
    for (const auto& [type, q] : demand) all_leftover[k++] = q;
  }
  IpOptions ip_options;
  ip_options.node_limit = config.warm_start_node_limit;
  const IpResult ip = solve_ip(columns, demand, costs, ip_options, all_leftover);
  ws.proven = ip.proven;
  ws.ip_nodes = ip.nodes;

  Solution& s = ws.solution;
  ItemCounts mu;
  for (const auto& [id, count] : ip.solution.column_counts) {
    const Column& col = ip.solution.columns.at(id);
    if (col.provenance == Provenance::kMatchedHistory) {
      s.columns[id] = col;
      s.column_counts[id] = count;
    } else {
      mu[col.coeffs.begin()->first] += count;
    }
  }
  double max_cost = 1.0;
  for (const auto& spu : matched) max_cost = std::max(max_cost, spu.cost);
  if (config.heuristic_fallback) {
    for (Column& col : pack_leftovers(mu, config.heuristic_capacity)) {
      s.column_counts[col.id] = 1;
      s.columns.emplace(col.id, std::move(col));
    }
  } else {
    const double big_m = artificial_cost(demand, max_cost);
    for (const auto& [type, q] : mu) {
      Column col = make_slack_column(type, big_m);
      s.column_counts[col.id] = q;
      s.columns.emplace(col.id, std::move(col));
    }
  }
  for (const auto& [type, q] : mu) {
    if (q > 0) s.heuristic_slack[type] = q;
    ws.leftover += q;
  }
  s.objective = 0.0;
  for (const auto& [id, count] : s.column_counts) {
    s.objective += s.columns.at(id).cost * static_cast<double>(count);
  }
  s.status = ip.proven ? SolveStatus::kOptimal : SolveStatus::kFeasible;
  return ws;
}

inline WarmStart warm_start(const Order& order, std::span<const Spu> matched,
                            std::size_t sample_size, std::uint64_t rng_seed) {
  ColGenConfig config;
  config.warm_start_size = sample_size;
  config.rng_seed = rng_seed;
  return warm_start(order, matched, config);
}

struct Admission {
  std::string column_id;
  double delta = 0.0;
};

struct TraceEntry {
  std::vector<Admission> admitted;
  // Objective of the RMP whose duals priced the admitted columns.
  double lp_objective = 0.0;
};

struct ColGenState {
  Order order;
  std::vector<Column> candidates;
  std::vector<Column> in_rmp;
  std::size_t iteration = 0;
  Duals duals;
  std::vector<TraceEntry> trace;
};

// RMP LP over `columns` with one equality row per order item.
inline LpProblem build_rmp(const ItemCounts& demand, std::span<const Column> columns) {
  std::map<ItemType, std::size_t> row_of;
  LpProblem lp;
  for (const auto& [type, q] : demand) {
    row_of.emplace(type, lp.rhs.size());
    lp.rhs.push_back(q);
  }
  for (const Column& col : columns) {
    SparseColumn sparse;
    for (const auto& [type, coeff] : col.coeffs) {
      if (coeff != 0) sparse.push_back({row_of.at(type), coeff});
    }
    lp.columns.push_back(std::move(sparse));
    lp.costs.push_back(col.cost);
  }
  return lp;
}

inline Duals duals_by_item(const ItemCounts& demand, const std::vector<double>& duals) {
  Duals out;
  std::size_t r = 0;
  for (const auto& [type, q] : demand) out[type] = duals.at(r++);
  return out;
}

// Warm start, initial RMP columns, the remaining candidate pool and the
// iteration-0 RMP solve, shared by full CG, feature extraction and
// prediction-driven solving.
struct RmpSetup {
  WarmStart warm;
  std::vector<Column> in_rmp;
  std::vector<Column> candidates;
  LpResult initial_lp;
  Duals initial_duals;
};

inline RmpSetup prepare_rmp(const Order& order, std::span<const Spu> matched,
                            const ColGenConfig& config) {
  RmpSetup setup;
  setup.warm = warm_start(order, matched, config);
  const ItemCounts demand = demand_of(order);
  std::set<std::string> in_ids;
  for (const auto& [id, count] : setup.warm.solution.column_counts) {
    if (count <= 0) continue;
    setup.in_rmp.push_back(setup.warm.solution.columns.at(id));
    in_ids.insert(id);
  }
  // Sampled but unused history columns stay in the RMP as well.
  if (config.keep_sampled_columns) {
    for (const Spu& spu : matched) {
      if (std::binary_search(setup.warm.sampled_ids.begin(), setup.warm.sampled_ids.end(), spu.id) &&
          in_ids.insert(spu.id).second) {
        setup.in_rmp.push_back(column_from_spu(spu));
      }
    }
  }
  if (!config.heuristic_fallback) {
    double max_cost = 1.0;
    for (const auto& spu : matched) max_cost = std::max(max_cost, spu.cost);
    const double big_m = artificial_cost(demand, max_cost);
    for (const auto& [type, q] : demand) {
      if (in_ids.insert(slack_column_id(type)).second) {
        setup.in_rmp.push_back(make_slack_column(type, big_m));
      }
    }
  }
  for (const Spu& spu : matched) {
    if (!in_ids.contains(spu.id)) setup.candidates.push_back(column_from_spu(spu));
  }
  setup.initial_lp = solve_lp(build_rmp(demand, setup.in_rmp));
  if (setup.initial_lp.status != LpStatus::kOptimal) {
    throw std::logic_error("colgen: warm-start RMP is not solvable for order " + order.id);
  }
  setup.initial_duals = duals_by_item(demand, setup.initial_lp.duals);
  return setup;
}

struct ColGenResult {
  Solution solution;
  WarmStart warm;
  ColGenState state;
  // One entry per RMP LP solve, in order; the last is the converged RMP.
  std::vector<double> lp_objectives;
  Duals initial_duals;
  IpResult ip;
  bool hit_iteration_limit = false;
};

// Integer solve over a fixed RMP, seeded with the warm-start plan.
inline IpResult solve_rmp_ip(const Order& order, const std::vector<Column>& in_rmp,
                             const WarmStart& warm, const ColGenConfig& config) {
  std::vector<Quantity> incumbent(in_rmp.size(), 0);
  for (std::size_t j = 0; j < in_rmp.size(); ++j) {
    const auto it = warm.solution.column_counts.find(in_rmp[j].id);
    if (it != warm.solution.column_counts.end()) incumbent[j] = it->second;
  }
  std::vector<double> costs;
  for (const auto& c : in_rmp) costs.push_back(c.cost);
  IpOptions options;
  options.node_limit = config.node_limit;
  return solve_ip(in_rmp, demand_of(order), costs, options, incumbent);
}

// Continues from a prepared RMP. `any_matched` is false when the order has
// no matched SPU, in which case the warm-start plan is returned as is.
inline ColGenResult run_colgen(const Order& order, RmpSetup setup, bool any_matched,
                               const ColGenConfig& config) {
  ColGenResult result;
  result.warm = setup.warm;
  result.initial_duals = setup.initial_duals;
  ColGenState& state = result.state;
  state.order = order;
  state.in_rmp = std::move(setup.in_rmp);
  state.candidates = std::move(setup.candidates);
  state.duals = setup.initial_duals;

  if (!any_matched) {
    result.lp_objectives.push_back(setup.initial_lp.objective);
    result.solution = setup.warm.solution;
    return result;
  }

  const ItemCounts demand = demand_of(order);
  LpResult lp = std::move(setup.initial_lp);
  while (true) {
    result.lp_objectives.push_back(lp.objective);
    state.duals = duals_by_item(demand, lp.duals);
    if (state.iteration >= config.max_iters) {
      result.hit_iteration_limit = !state.candidates.empty() &&
                                   price_from_history(state.candidates, state.duals, config.epsilon);
      break;
    }
    std::vector<PricedColumn> admit;
    if (config.columns_per_iteration == 1) {
      if (auto best = price_from_history(state.candidates, state.duals, config.epsilon)) {
        admit.push_back(*best);
      }
    } else {
      admit = price_top(state.candidates, state.duals, config.columns_per_iteration, config.epsilon);
    }
    if (admit.empty()) break;

    TraceEntry entry;
    entry.lp_objective = lp.objective;
    std::vector<bool> taken(state.candidates.size(), false);
    for (const auto& p : admit) {
      entry.admitted.push_back({p.id, p.delta});
      taken[p.index] = true;
      state.in_rmp.push_back(state.candidates[p.index]);
    }
    std::vector<Column> remaining;
    for (std::size_t i = 0; i < state.candidates.size(); ++i) {
      if (!taken[i]) remaining.push_back(std::move(state.candidates[i]));
    }
    state.candidates = std::move(remaining);
    state.trace.push_back(std::move(entry));
    ++state.iteration;

    lp = solve_lp(build_rmp(demand, state.in_rmp));
    if (lp.status != LpStatus::kOptimal) throw std::logic_error("colgen: RMP became unsolvable");
  }

  result.ip = solve_rmp_ip(order, state.in_rmp, result.warm, config);
  result.solution = result.ip.solution;
  if (result.hit_iteration_limit) result.solution.status = SolveStatus::kIterationLimit;
  return result;
}

inline ColGenResult run_colgen(const Order& order, std::span<const Spu> matched,
                               const ColGenConfig& config) {
  return run_colgen(order, prepare_rmp(order, matched, config), !matched.empty(), config);
}

// Solves the integer program over the initial RMP columns plus the
// `selected` candidates, appended in the given order, without iterating;
// used when a predictor chooses the columns. Unknown ids are ignored.
inline IpResult solve_with_selected(const Order& order, const RmpSetup& setup,
                                    const std::vector<std::string>& selected,
                                    const ColGenConfig& config) {
  std::vector<Column> in_rmp = setup.in_rmp;
  std::map<std::string, std::size_t> where;
  for (std::size_t i = 0; i < setup.candidates.size(); ++i) where.emplace(setup.candidates[i].id, i);
  std::set<std::string> added;
  for (const auto& id : selected) {
    const auto it = where.find(id);
    if (it != where.end() && added.insert(id).second) in_rmp.push_back(setup.candidates[it->second]);
  }
  return solve_rmp_ip(order, in_rmp, setup.warm, config);
}

// Success in pure set-cover mode: no item left to slack.
inline bool packing_success(const Solution& s) {
  return s.status != SolveStatus::kInfeasible && total_slack(s) == 0;
}

}  // namespace spupack
