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

// Benchmark harness: a method comparison on one order set and a success
// curve over combined orders (K orders merged into one). Every plan any
// method emits is checked for exact cover.

#pragma once

#include <cstdio>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "spupack/datagen.hpp"
#include "spupack/pipeline.hpp"

namespace spupack {

struct BenchOptions {
  ColGenConfig config;
  std::vector<Method> methods{Method::kColGen, Method::kFuzzy};
  std::vector<std::size_t> ks{1, 3, 5, 10};
  std::uint64_t combine_seed = 0;
  std::size_t jobs = 1;
  std::function<Predictor()> make_predictor;
};

// Setting used for the acceptance bench: pure set-cover mode and a tighter
// node budget for the final integer solve.
inline ColGenConfig bench_config(std::uint64_t seed) {
  ColGenConfig c;
  c.heuristic_fallback = false;
  c.node_limit = 10000;
  c.rng_seed = seed;
  return c;
}

struct BenchRow {
  std::size_t k = 1;
  Method method = Method::kColGen;
  Summary summary;
};

struct BenchReport {
  std::vector<BenchRow> comparison;
  std::vector<BenchRow> sweep;
  std::size_t plans_checked = 0;
  // "order_id/method: violation" for every plan that is not an exact cover.
  std::vector<std::string> cover_violations;
  double total_ms = 0.0;
};

namespace detail {

inline BenchRow bench_one(const OrderSolver& solver, const std::vector<Order>& orders, Method method,
                          std::size_t k, const BenchOptions& options, BenchReport& report) {
  const auto results = solve_all(solver, orders, method, options.jobs, options.make_predictor);
  for (std::size_t i = 0; i < results.size(); ++i) {
    ++report.plans_checked;
    for (const auto& v : check_exact_cover(orders[i], results[i].solution)) {
      report.cover_violations.push_back(orders[i].id + "/" + to_string(method) + ": " + v);
    }
  }
  BenchRow row{k, method, summarize(results)};
  report.total_ms += row.summary.total_ms;
  return row;
}

}  // namespace detail

// Comparison on `orders` with the configured tag handling; the sweep merges
// orders, which drops demand tags, so it always matches with relaxed tags.
inline BenchReport run_bench(const std::vector<Order>& orders, const HistoryRecord& history,
                             const BenchOptions& options) {
  for (const Method m : options.methods) {
    if (m == Method::kPredict && !options.make_predictor) {
      throw std::invalid_argument("mpn method requested without a predictor command");
    }
  }
  BenchReport report;
  const OrderSolver solver(history, options.config);
  for (const Method m : options.methods) {
    report.comparison.push_back(detail::bench_one(solver, orders, m, 1, options, report));
  }
  if (!options.ks.empty()) {
    ColGenConfig relaxed = options.config;
    relaxed.relax_demand = true;
    const OrderSolver sweep_solver(history, relaxed);
    for (const std::size_t k : options.ks) {
      const auto merged = combine_orders(orders, k, options.combine_seed);
      for (const Method m : options.methods) {
        report.sweep.push_back(detail::bench_one(sweep_solver, merged, m, k, options, report));
      }
    }
  }
  return report;
}

inline void write_comparison_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "method,orders,successes,success_rate,mean_objective,fallbacks,total_time_ms\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%.6f,%.6f,%zu,%.3f\n", to_string(r.method).c_str(),
                  r.summary.orders, r.summary.successes, r.summary.success_rate(), r.summary.mean_objective,
                  r.summary.fallbacks, r.summary.total_ms);
    out << buf;
  }
}

inline void write_sweep_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "k,method,orders,success_rate,mean_objective,total_time_ms\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%zu,%s,%zu,%.6f,%.6f,%.3f\n", r.k, to_string(r.method).c_str(),
                  r.summary.orders, r.summary.success_rate(), r.summary.mean_objective, r.summary.total_ms);
    out << buf;
  }
}

// Success rates of `method` along the sweep, in K order.
inline std::vector<double> sweep_curve(const BenchReport& report, Method method) {
  std::vector<double> out;
  for (const auto& r : report.sweep) {
    if (r.method == method) out.push_back(r.summary.success_rate());
  }
  return out;
}

}  // namespace spupack
