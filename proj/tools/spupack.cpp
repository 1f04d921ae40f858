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

// spupack: solve | bench | gen-data | emit-train | predict-solve

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "spupack/bench.hpp"
#include "spupack/datagen.hpp"
#include "spupack/io.hpp"
#include "spupack/pipeline.hpp"

namespace {

using namespace spupack;

// Input problems; reported with exit code 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<Order> load_orders(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return read_jsonl(in, [](const Json& j) {
      Order o = order_from_json(j);
      const auto bad = validate_order(o);
      if (!bad.empty()) throw std::invalid_argument(bad.front());
      return o;
    });
  } catch (const ParseError& e) {
    throw InputError(path + ": " + e.what());
  }
}

HistoryRecord load_history(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  HistoryRecord record;
  try {
    record.spus = read_jsonl(in, [](const Json& j) {
      Spu s = spu_from_json(j);
      const auto bad = validate_spu(s);
      if (!bad.empty()) throw std::invalid_argument(bad.front());
      return s;
    });
  } catch (const ParseError& e) {
    throw InputError(path + ": " + e.what());
  }
  if (!record.spus.empty() && record.spus.front().source_month) record.month = *record.spus.front().source_month;
  return record;
}

// Writes to `path`, or to stdout when it is empty or "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw InputError("cannot write " + path);
    }
  }
  std::ostream& get() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

struct CommonFlags {
  ColGenConfig config;
  std::size_t jobs = 1;
  bool no_timing = false;
};

void add_config_flags(CLI::App* sub, CommonFlags& f) {
  ColGenConfig& c = f.config;
  sub->add_option("--max-iters", c.max_iters, "column generation iteration limit")->capture_default_str();
  sub->add_option("--epsilon", c.epsilon, "reduced-cost admission tolerance")->capture_default_str();
  sub->add_option("--warm-start-size", c.warm_start_size, "matched SPUs sampled for the warm start")
      ->capture_default_str();
  sub->add_option("--heuristic-capacity", c.heuristic_capacity, "items per heuristic unit")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_flag("--relax-demand", c.relax_demand, "ignore customer-demand tags when matching");
  sub->add_option("--seed", c.rng_seed, "RNG seed")->capture_default_str();
  sub->add_option("--heuristic-fallback", c.heuristic_fallback,
                  "pack leftovers heuristically (false: pure set-cover mode)")
      ->capture_default_str();
  sub->add_option("--columns-per-iter", c.columns_per_iteration, "columns admitted per iteration")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--node-limit", c.node_limit, "branch-and-bound node budget")->capture_default_str();
  sub->add_option("--warm-start-node-limit", c.warm_start_node_limit, "node budget of the warm start")
      ->capture_default_str();
  sub->add_option("--keep-sampled", c.keep_sampled_columns, "keep unused sampled columns in the RMP")
      ->capture_default_str();
  sub->add_option("--jobs", f.jobs, "parallel order workers")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_flag("--no-timing", f.no_timing, "omit wall-clock fields so output is reproducible");
}

void write_results(std::ostream& out, const std::string& command, const CommonFlags& f, Method method,
                   const std::vector<OrderResult>& results) {
  nlohmann::json header{{"type", "header"},
                        {"command", command},
                        {"method", to_string(method)},
                        {"seed", f.config.rng_seed},
                        {"config", config_to_json(f.config)}};
  out << header.dump() << '\n';
  for (const auto& r : results) out << to_json(r, !f.no_timing).dump() << '\n';
  out << to_json(summarize(results), !f.no_timing).dump() << '\n';
}

std::vector<std::size_t> parse_list(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stoul(tok));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  // A predictor that exits early must surface as a failed request, not kill us.
  std::signal(SIGPIPE, SIG_IGN);

  CLI::App app{"Exact-cover packing from historical SPUs by column generation"};
  app.set_config("--config", "", "TOML/INI file with option values");
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "solve orders against a packing history");
  CommonFlags solve_flags;
  std::string solve_orders, solve_history, solve_out, solve_method = "colgen";
  solve->add_option("--orders", solve_orders, "orders JSONL")->required();
  solve->add_option("--history", solve_history, "history JSONL")->required();
  solve->add_option("--out", solve_out, "results JSONL (default stdout)");
  solve->add_option("--method", solve_method, "colgen | fuzzy")->capture_default_str();
  add_config_flags(solve, solve_flags);

  // predict-solve
  auto* predict = app.add_subcommand("predict-solve", "solve with columns chosen by a predictor process");
  CommonFlags predict_flags;
  std::string predict_orders, predict_history, predict_out, predictor_cmd;
  long predict_timeout_ms = 30000;
  predict->add_option("--orders", predict_orders, "orders JSONL")->required();
  predict->add_option("--history", predict_history, "history JSONL")->required();
  predict->add_option("--predictor", predictor_cmd, "shell command speaking the bridge protocol")->required();
  predict->add_option("--timeout-ms", predict_timeout_ms, "per-order predictor timeout")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  predict->add_option("--out", predict_out, "results JSONL (default stdout)");
  add_config_flags(predict, predict_flags);

  // emit-train
  auto* emit = app.add_subcommand("emit-train", "write training instances labelled by full CG runs");
  CommonFlags emit_flags;
  std::string emit_orders, emit_history, emit_out;
  emit->add_option("--orders", emit_orders, "orders JSONL")->required();
  emit->add_option("--history", emit_history, "history JSONL")->required();
  emit->add_option("--out", emit_out, "training JSONL (default stdout)");
  add_config_flags(emit, emit_flags);

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "generate synthetic orders and history");
  std::string profile_name = "standard", gen_orders_out, gen_history_out;
  std::size_t gen_n = 500, gen_history_n = 0, gen_k = 1;
  std::uint64_t gen_seed = 0;
  std::optional<double> mean_types, mean_items, tag_probability, keep_probability, zipf;
  std::optional<std::size_t> universe;
  gen->add_option("--profile", profile_name, "standard | toy")->capture_default_str();
  gen->add_option("--seed", gen_seed, "RNG seed")->capture_default_str();
  gen->add_option("--num-orders", gen_n, "orders to generate")->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--num-history", gen_history_n, "history SPUs (default: profile ratio times orders)");
  gen->add_option("--combine", gen_k, "merge every K orders into one")->check(CLI::PositiveNumber)
      ->capture_default_str();
  gen->add_option("--mean-types", mean_types, "mean item types per order");
  gen->add_option("--mean-items", mean_items, "mean items per order");
  gen->add_option("--universe", universe, "number of item types");
  gen->add_option("--zipf", zipf, "item popularity exponent");
  gen->add_option("--tag-probability", tag_probability, "fraction of orders with a demand tag");
  gen->add_option("--keep-probability", keep_probability, "chance a fragment enters the history");
  gen->add_option("--out-orders", gen_orders_out, "orders JSONL")->required();
  gen->add_option("--out-history", gen_history_out, "history JSONL")->required();

  // bench
  auto* bench = app.add_subcommand("bench", "compare methods and sweep combined orders");
  CommonFlags bench_flags;
  bench_flags.config = bench_config(0);
  std::string bench_orders, bench_history, bench_out_dir = ".", bench_methods = "colgen,fuzzy",
                                        bench_ks = "1,3,5,10", bench_predictor, bench_profile = "standard";
  std::size_t bench_n = 500, bench_history_n = 0;
  std::uint64_t bench_data_seed = 7, bench_combine_seed = 11;
  long bench_timeout_ms = 30000;
  bench->add_option("--orders", bench_orders, "orders JSONL (default: generate)");
  bench->add_option("--history", bench_history, "history JSONL (default: generate)");
  bench->add_option("--profile", bench_profile, "generator profile")->capture_default_str();
  bench->add_option("--num-orders", bench_n, "generated orders")->capture_default_str();
  bench->add_option("--num-history", bench_history_n, "generated history SPUs");
  bench->add_option("--data-seed", bench_data_seed, "generator seed")->capture_default_str();
  bench->add_option("--combine-seed", bench_combine_seed, "seed for merging orders")->capture_default_str();
  bench->add_option("--methods", bench_methods, "comma list of colgen, fuzzy, mpn")->capture_default_str();
  bench->add_option("--ks", bench_ks, "comma list of K values; empty disables the sweep")->capture_default_str();
  bench->add_option("--predictor", bench_predictor, "predictor command for mpn");
  bench->add_option("--timeout-ms", bench_timeout_ms, "per-order predictor timeout")->capture_default_str();
  bench->add_option("--out-dir", bench_out_dir, "directory for comparison.csv and ksweep.csv")
      ->capture_default_str();
  add_config_flags(bench, bench_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      const Method method = method_from_string(solve_method);
      if (method == Method::kPredict) throw InputError("use predict-solve for the mpn method");
      const auto orders = load_orders(solve_orders);
      const OrderSolver solver(load_history(solve_history), solve_flags.config);
      const auto results = solve_all(solver, orders, method, solve_flags.jobs);
      Output out(solve_out);
      write_results(out.get(), "solve", solve_flags, method, results);
    } else if (*predict) {
      const auto orders = load_orders(predict_orders);
      const OrderSolver solver(load_history(predict_history), predict_flags.config);
      const auto timeout = std::chrono::milliseconds(predict_timeout_ms);
      const auto results = solve_all(solver, orders, Method::kPredict, predict_flags.jobs,
                                     [&] { return process_predictor(predictor_cmd, timeout); });
      Output out(predict_out);
      write_results(out.get(), "predict-solve", predict_flags, Method::kPredict, results);
    } else if (*emit) {
      const auto orders = load_orders(emit_orders);
      const OrderSolver solver(load_history(emit_history), emit_flags.config);
      std::vector<std::optional<TrainingInstance>> instances(orders.size());
      parallel_for(orders.size(), emit_flags.jobs,
                   [&](std::size_t i, std::size_t) { instances[i] = solver.training_instance(orders[i]); });
      Output out(emit_out);
      for (const auto& inst : instances) {
        if (inst) out.get() << to_json(*inst).dump() << '\n';
      }
    } else if (*gen) {
      DataProfile p = profile_by_name(profile_name);
      if (mean_types) p.mean_types = *mean_types;
      if (mean_items) p.mean_items = *mean_items;
      if (universe) p.item_universe = *universe;
      if (zipf) p.zipf_exponent = *zipf;
      if (tag_probability) p.tag_probability = *tag_probability;
      if (keep_probability) p.keep_probability = *keep_probability;
      const std::size_t n_hist =
          gen_history_n ? gen_history_n : static_cast<std::size_t>(p.history_per_order * static_cast<double>(gen_n));
      Dataset ds = generate_dataset(gen_n, n_hist, gen_seed, p);
      if (gen_k > 1) ds.orders = combine_orders(ds.orders, gen_k, gen_seed);
      Output orders_out(gen_orders_out);
      write_orders(orders_out.get(), ds.orders);
      Output history_out(gen_history_out);
      write_history(history_out.get(), ds.history);
    } else if (*bench) {
      std::vector<Order> orders;
      HistoryRecord history;
      if (!bench_orders.empty() || !bench_history.empty()) {
        if (bench_orders.empty() || bench_history.empty()) throw InputError("bench needs both --orders and --history");
        orders = load_orders(bench_orders);
        history = load_history(bench_history);
      } else {
        const DataProfile p = profile_by_name(bench_profile);
        const std::size_t n_hist = bench_history_n ? bench_history_n
                                                   : static_cast<std::size_t>(p.history_per_order *
                                                                              static_cast<double>(bench_n));
        Dataset ds = generate_dataset(bench_n, n_hist, bench_data_seed, p);
        orders = std::move(ds.orders);
        history = std::move(ds.history);
      }
      BenchOptions options;
      options.config = bench_flags.config;
      options.jobs = bench_flags.jobs;
      options.combine_seed = bench_combine_seed;
      options.ks = parse_list(bench_ks);
      options.methods.clear();
      std::stringstream ss(bench_methods);
      for (std::string tok; std::getline(ss, tok, ',');) {
        if (!tok.empty()) options.methods.push_back(method_from_string(tok));
      }
      if (!bench_predictor.empty()) {
        const auto timeout = std::chrono::milliseconds(bench_timeout_ms);
        options.make_predictor = [&bench_predictor, timeout] { return process_predictor(bench_predictor, timeout); };
      }
      const BenchReport report = run_bench(orders, history, options);
      std::filesystem::create_directories(bench_out_dir);
      {
        std::ofstream f(std::filesystem::path(bench_out_dir) / "comparison.csv");
        write_comparison_csv(f, report.comparison);
      }
      {
        std::ofstream f(std::filesystem::path(bench_out_dir) / "ksweep.csv");
        write_sweep_csv(f, report.sweep);
      }
      write_comparison_csv(std::cout, report.comparison);
      if (!report.sweep.empty()) write_sweep_csv(std::cout, report.sweep);
      std::cout << "plans checked: " << report.plans_checked
                << ", exact-cover violations: " << report.cover_violations.size() << '\n';
      for (const auto& v : report.cover_violations) std::cerr << "violation: " << v << '\n';
      if (!report.cover_violations.empty()) return 1;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
