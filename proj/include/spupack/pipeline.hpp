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

// Per-order solving for each method, result records and a small parallel
// driver. Shared by the command-line tool and the acceptance suite.

#pragma once

#include <atomic>
#include <chrono>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "spupack/baseline_fuzzy.hpp"
#include "spupack/bridge.hpp"
#include "spupack/colgen.hpp"
#include "spupack/core_model.hpp"
#include "spupack/features.hpp"
#include "spupack/heuristic_packer.hpp"
#include "spupack/io.hpp"
#include "spupack/matcher.hpp"

namespace spupack {

enum class Method { kColGen, kFuzzy, kPredict };

inline std::string to_string(Method m) {
  switch (m) {
    case Method::kColGen: return "colgen";
    case Method::kFuzzy: return "fuzzy";
    case Method::kPredict: return "mpn";
  }
  return "?";
}

inline Method method_from_string(const std::string& s) {
  if (s == "colgen" || s == "cg") return Method::kColGen;
  if (s == "fuzzy") return Method::kFuzzy;
  if (s == "mpn" || s == "predict") return Method::kPredict;
  throw std::invalid_argument("unknown method " + s);
}

struct OrderResult {
  std::string order_id;
  Method method = Method::kColGen;
  Solution solution;
  // Exact cover with history columns only.
  bool success = false;
  std::size_t matched = 0;
  std::size_t iterations = 0;
  double warm_objective = 0.0;
  std::vector<double> lp_objectives;
  double wall_ms = 0.0;
  // Set when a predictor failed and the order was solved by full CG.
  bool fallback = false;
  std::string fallback_reason;
};

// Model objective for reporting: orders left with artificial slack carry a
// big-M term and are excluded from objective means.
inline bool has_artificial(const Solution& s) {
  for (const auto& [id, count] : s.column_counts) {
    if (count > 0 && s.columns.at(id).provenance == Provenance::kArtificialSlack) return true;
  }
  return false;
}

inline nlohmann::json to_json(const OrderResult& r, bool timing) {
  nlohmann::json j{{"type", "result"},
                   {"order_id", r.order_id},
                   {"method", to_string(r.method)},
                   {"status", to_string(r.solution.status)},
                   {"success", r.success},
                   {"objective", r.solution.objective},
                   {"units", units_used(r.solution)},
                   {"column_counts", r.solution.column_counts},
                   {"mu", r.solution.heuristic_slack},
                   {"iterations", r.iterations},
                   {"matched", r.matched}};
  if (r.fallback) {
    j["fallback"] = "colgen";
    j["fallback_reason"] = r.fallback_reason;
  }
  if (timing) j["wall_ms"] = r.wall_ms;
  j["solution"] = to_json(r.solution);
  return j;
}

struct Summary {
  std::size_t orders = 0;
  std::size_t successes = 0;
  std::size_t fallbacks = 0;
  double mean_objective = 0.0;
  double total_ms = 0.0;

  double success_rate() const { return orders ? static_cast<double>(successes) / static_cast<double>(orders) : 0.0; }
};

inline Summary summarize(const std::vector<OrderResult>& results) {
  Summary s;
  std::size_t counted = 0;
  for (const auto& r : results) {
    ++s.orders;
    s.successes += r.success ? 1 : 0;
    s.fallbacks += r.fallback ? 1 : 0;
    s.total_ms += r.wall_ms;
    if (!has_artificial(r.solution)) {
      s.mean_objective += r.solution.objective;
      ++counted;
    }
  }
  if (counted) s.mean_objective /= static_cast<double>(counted);
  return s;
}

inline nlohmann::json to_json(const Summary& s, bool timing) {
  nlohmann::json j{{"type", "summary"},
                   {"orders", s.orders},
                   {"successes", s.successes},
                   {"success_rate", s.success_rate()},
                   {"mean_objective", s.mean_objective},
                   {"fallbacks", s.fallbacks}};
  if (timing) j["total_time_ms"] = s.total_ms;
  return j;
}

inline nlohmann::json config_to_json(const ColGenConfig& c) {
  return {{"max_iters", c.max_iters},
          {"epsilon", c.epsilon},
          {"warm_start_size", c.warm_start_size},
          {"heuristic_capacity", c.heuristic_capacity},
          {"relax_demand", c.relax_demand},
          {"seed", c.rng_seed},
          {"heuristic_fallback", c.heuristic_fallback},
          {"columns_per_iteration", c.columns_per_iteration},
          {"node_limit", c.node_limit},
          {"warm_start_node_limit", c.warm_start_node_limit},
          {"keep_sampled_columns", c.keep_sampled_columns}};
}

// A predictor maps a request to selected ids, or to nullopt with a reason.
struct Prediction {
  std::optional<std::vector<std::string>> selected;
  std::string error;
};
using Predictor = std::function<Prediction(const PredictRequest&)>;

// Predictor backed by a child process; at most one request in flight.
inline Predictor process_predictor(const std::string& command, std::chrono::milliseconds timeout) {
  auto proc = std::make_shared<PredictorProcess>(command);
  return [proc, timeout](const PredictRequest& req) -> Prediction {
    const auto line = proc->exchange(encode_request(req), timeout);
    if (!line) return {std::nullopt, "timeout"};
    try {
      return {decode_response(*line, req), {}};
    } catch (const BridgeError& e) {
      return {std::nullopt, std::string("malformed response: ") + e.what()};
    }
  };
}

class OrderSolver {
 public:
  OrderSolver(const HistoryRecord& history, ColGenConfig config)
      : index_(build_index(history)), config_(config) {
    const auto bad = validate_config(config_);
    if (!bad.empty()) throw std::invalid_argument("invalid config: " + bad.front());
  }

  const ColGenConfig& config() const { return config_; }

  std::vector<Spu> matched(const Order& order) const { return matched_spus(order, index_, config_.relax_demand); }

  // Config with the warm-start stream derived from the seed and order id.
  ColGenConfig config_for(const Order& order) const {
    ColGenConfig c = config_;
    c.rng_seed = order_seed(config_.rng_seed, order.id);
    return c;
  }

  OrderResult solve(const Order& order, Method method, const Predictor* predictor = nullptr) const {
    const auto start = std::chrono::steady_clock::now();
    OrderResult r;
    switch (method) {
      case Method::kColGen: r = run_cg(order); break;
      case Method::kFuzzy: r = run_fuzzy(order); break;
      case Method::kPredict:
        if (!predictor) throw std::invalid_argument("mpn method requires a predictor");
        r = run_predict(order, *predictor);
        break;
    }
    r.method = method;
    r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return r;
  }

  // Training instance from a full CG run; nullopt when the run did not
  // converge (iteration limit) and so has no trustworthy label.
  std::optional<TrainingInstance> training_instance(const Order& order) const {
    const auto m = matched(order);
    const ColGenConfig c = config_for(order);
    RmpSetup setup = prepare_rmp(order, m, c);
    const ColGenResult run = run_colgen(order, setup, !m.empty(), c);
    if (run.hit_iteration_limit || run.solution.status == SolveStatus::kInfeasible) return std::nullopt;
    return make_training_instance(order, setup, run);
  }

 private:
  OrderResult run_cg(const Order& order) const {
    const auto m = matched(order);
    const ColGenConfig c = config_for(order);
    ColGenResult run = run_colgen(order, m, c);
    OrderResult r;
    r.order_id = order.id;
    r.matched = m.size();
    r.iterations = run.state.iteration;
    r.warm_objective = run.warm.solution.objective;
    r.lp_objectives = std::move(run.lp_objectives);
    r.solution = std::move(run.solution);
    r.success = packing_success(r.solution);
    return r;
  }

  OrderResult run_fuzzy(const Order& order) const {
    const auto m = matched(order);
    FuzzyResult f = fuzzy_match_solve(order, m);
    OrderResult r;
    r.order_id = order.id;
    r.matched = m.size();
    r.success = f.success;
    if (f.solution) {
      r.solution = std::move(*f.solution);
    } else {
      // Keep the partial greedy plan and account for what is left the same
      // way the solver does, so every emitted plan is an exact cover.
      Solution& s = r.solution;
      std::map<std::string, Quantity> counts;
      for (const auto& id : f.picks) ++counts[id];
      for (const auto& spu : m) {
        const auto it = counts.find(spu.id);
        if (it == counts.end()) continue;
        s.columns[spu.id] = column_from_spu(spu);
        s.column_counts[spu.id] = it->second;
      }
      ItemCounts left;
      for (const auto& [t, q] : f.remaining) {
        if (q > 0) left[t] = q;
      }
      s.heuristic_slack = left;
      if (config_.heuristic_fallback) {
        for (Column& col : pack_leftovers(left, config_.heuristic_capacity)) {
          s.column_counts[col.id] = 1;
          s.columns.emplace(col.id, std::move(col));
        }
      } else {
        double max_cost = 1.0;
        for (const auto& spu : m) max_cost = std::max(max_cost, spu.cost);
        const double big_m = artificial_cost(demand_of(order), max_cost);
        for (const auto& [t, q] : left) {
          Column col = make_slack_column(t, big_m);
          s.column_counts[col.id] = q;
          s.columns.emplace(col.id, std::move(col));
        }
      }
      for (const auto& [id, count] : s.column_counts) {
        s.objective += s.columns.at(id).cost * static_cast<double>(count);
      }
      s.status = SolveStatus::kFeasible;
    }
    r.warm_objective = r.solution.objective;
    return r;
  }

  OrderResult run_predict(const Order& order, const Predictor& predictor) const {
    const auto m = matched(order);
    const ColGenConfig c = config_for(order);
    RmpSetup setup = prepare_rmp(order, m, c);
    PredictRequest req;
    req.order_id = order.id;
    req.rhs = demand_of(order);
    for (const auto& col : setup.in_rmp) req.initial_column_ids.push_back(col.id);
    req.candidates = candidate_features(setup, req.rhs);
    const Prediction p = predictor(req);

    OrderResult r;
    r.order_id = order.id;
    r.matched = m.size();
    r.warm_objective = setup.warm.solution.objective;
    if (!p.selected) {
      ColGenResult run = run_colgen(order, std::move(setup), !m.empty(), c);
      r.fallback = true;
      r.fallback_reason = p.error;
      r.iterations = run.state.iteration;
      r.lp_objectives = std::move(run.lp_objectives);
      r.solution = std::move(run.solution);
    } else {
      r.lp_objectives.push_back(setup.initial_lp.objective);
      r.solution = solve_with_selected(order, setup, *p.selected, c).solution;
    }
    r.success = packing_success(r.solution);
    return r;
  }

  HistoryIndex index_;
  ColGenConfig config_;
};

// Runs fn(i, worker) for i in [0, n) on `jobs` threads. The first exception
// thrown by any task is rethrown after all workers stop.
inline void parallel_for(std::size_t n, std::size_t jobs,
                         const std::function<void(std::size_t, std::size_t)>& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i, 0);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i, w);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next.store(n);
          return;
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

// Solves every order with `method`; `make_predictor` builds one predictor
// per worker when the method needs one.
inline std::vector<OrderResult> solve_all(const OrderSolver& solver, const std::vector<Order>& orders,
                                          Method method, std::size_t jobs,
                                          const std::function<Predictor()>& make_predictor = {}) {
  std::vector<OrderResult> results(orders.size());
  jobs = std::max<std::size_t>(1, std::min(jobs, orders.size()));
  std::vector<Predictor> predictors;
  if (method == Method::kPredict) {
    if (!make_predictor) throw std::invalid_argument("mpn method requires a predictor");
    for (std::size_t w = 0; w < jobs; ++w) predictors.push_back(make_predictor());
  }
  parallel_for(orders.size(), jobs, [&](std::size_t i, std::size_t w) {
    results[i] = solver.solve(orders[i], method, predictors.empty() ? nullptr : &predictors[w]);
  });
  return results;
}

}  // namespace spupack
