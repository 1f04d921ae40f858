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

#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "spupack/colgen.hpp"
#include "spupack/datagen.hpp"
#include "spupack/matcher.hpp"

using namespace spupack;

namespace {

Column candidate(const std::string& id, ItemCounts coeffs, double cost = 1.0) {
  Column c;
  c.id = id;
  c.coeffs = std::move(coeffs);
  c.cost = cost;
  return c;
}

ColGenConfig pure() {
  ColGenConfig c;
  c.heuristic_fallback = false;
  return c;
}

std::vector<Column> as_columns(const std::vector<Spu>& spus) {
  std::vector<Column> out;
  for (const auto& s : spus) out.push_back(column_from_spu(s));
  return out;
}

std::vector<double> costs_of(const std::vector<Column>& cols) {
  std::vector<double> out;
  for (const auto& c : cols) out.push_back(c.cost);
  return out;
}

}  // namespace

TEST(WarmStart, NoHistoryFallsBackToHeuristic) {
  const Order o = fixtures::order("o", {{"A", 2}});
  const WarmStart ws = warm_start(o, {}, ColGenConfig{});
  EXPECT_EQ(ws.leftover, 2);
  EXPECT_EQ(ws.solution.heuristic_slack.at("A"), 2);
  ASSERT_EQ(ws.solution.column_counts.size(), 1u);
  const Column& c = ws.solution.columns.begin()->second;
  EXPECT_EQ(c.provenance, Provenance::kHeuristic);
  EXPECT_EQ(c.coeffs, (ItemCounts{{"A", 2}}));
  EXPECT_TRUE(check_exact_cover(o, ws.solution).empty());
}

TEST(WarmStart, CoversFailCaseWithoutLeftover) {
  const auto all = fixtures::fail_case_spus();
  const std::vector<Spu> matched{all[1], all[2]};
  const WarmStart ws = warm_start(fixtures::fail_case_order(), matched, ColGenConfig{});
  EXPECT_EQ(ws.leftover, 0);
  EXPECT_EQ(ws.solution.column_counts, (std::map<std::string, Quantity>{{"SPU2", 2}, {"SPU3", 1}}));
}

TEST(WarmStart, LeftoverMatchesBruteForce) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 40; ++trial) {
    const auto sc = fixtures::random_small_case(rng, 4, 4, 6);
    const WarmStart ws = warm_start(sc.order, sc.matched, ColGenConfig{});
    EXPECT_EQ(ws.leftover, oracle::brute_force_min_leftover(as_columns(sc.matched), demand_of(sc.order)))
        << "trial " << trial;
    EXPECT_TRUE(check_exact_cover(sc.order, ws.solution).empty());
  }
}

TEST(WarmStart, SampleIsSeededAndSorted) {
  std::vector<Spu> matched;
  for (int i = 0; i < 50; ++i) matched.push_back(fixtures::spu("s" + std::to_string(100 + i), {{"A", 1}}));
  const Order o = fixtures::order("o", {{"A", 3}});
  const auto a = warm_start(o, matched, 7, 99);
  const auto b = warm_start(o, matched, 7, 99);
  const auto c = warm_start(o, matched, 7, 100);
  EXPECT_EQ(a.sampled_ids.size(), 7u);
  EXPECT_EQ(a.sampled_ids, b.sampled_ids);
  EXPECT_NE(a.sampled_ids, c.sampled_ids);
  EXPECT_TRUE(std::is_sorted(a.sampled_ids.begin(), a.sampled_ids.end()));
}

TEST(Pricing, ZeroDualsMeanNoColumn) {
  const std::vector<Column> cands{candidate("X", {{"A", 2}}), candidate("Y", {{"A", 1}})};
  EXPECT_FALSE(price_from_history(cands, {{"A", 0.0}}).has_value());
}

TEST(Pricing, PicksMostNegative) {
  const std::vector<Column> cands{candidate("X", {{"A", 2}}), candidate("Y", {{"A", 1}})};
  const auto p = price_from_history(cands, {{"A", 1.0}});
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(p->id, "X");
  EXPECT_DOUBLE_EQ(p->delta, -1.0);
}

TEST(Pricing, TiesGoToLowestId) {
  const std::vector<Column> cands{candidate("b", {{"A", 2}}), candidate("a", {{"A", 2}})};
  const auto p = price_from_history(cands, {{"A", 1.0}});
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(p->id, "a");
  EXPECT_EQ(p->index, 1u);
}

TEST(Pricing, MatchesExhaustiveArgmin) {
  std::mt19937_64 rng(47);
  int none = 0;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Column> cands;
    const int n = 1 + static_cast<int>(rng() % 200);
    for (int i = 0; i < n; ++i) {
      ItemCounts coeffs;
      for (int t = 0; t < 5; ++t) {
        if (rng() % 2) coeffs[fixtures::item(t)] = 1 + static_cast<Quantity>(rng() % 4);
      }
      if (coeffs.empty()) coeffs["A"] = 1;
      cands.push_back(candidate("c" + std::to_string(rng() % 1000), coeffs, 1.0));
    }
    Duals duals;
    // Quarter-step duals make exact ties common.
    for (int t = 0; t < 5; ++t) duals[fixtures::item(t)] = static_cast<double>(rng() % 5) * 0.25 - 0.25;
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      const double d = oracle::delta(cands[i], duals);
      const double b = best ? oracle::delta(cands[*best], duals) : 0.0;
      if (!best || d < b || (d == b && cands[i].id < cands[*best].id)) best = i;
    }
    const bool expect_none = !(oracle::delta(cands[*best], duals) < -kEpsilon);
    const auto got = price_from_history(cands, duals);
    if (expect_none) {
      ++none;
      EXPECT_FALSE(got.has_value());
    } else {
      ASSERT_TRUE(got.has_value());
      EXPECT_EQ(got->id, cands[*best].id);
      EXPECT_DOUBLE_EQ(got->delta, oracle::delta(cands[*best], duals));
      const auto top = price_top(cands, duals, 3);
      ASSERT_FALSE(top.empty());
      EXPECT_EQ(top.front().id, got->id);
    }
  }
  EXPECT_GT(none, 0);
}

TEST(ColGen, NoMatchedReturnsWarmStart) {
  const Order o = fixtures::order("o", {{"A", 5}, {"B", 1}});
  const auto r = run_colgen(o, {}, ColGenConfig{});
  EXPECT_EQ(r.solution, r.warm.solution);
  EXPECT_TRUE(check_exact_cover(o, r.solution).empty());
}

TEST(ColGen, FailCaseSolvesExactly) {
  for (const ColGenConfig& cfg : {ColGenConfig{}, pure()}) {
    const auto r = run_colgen(fixtures::fail_case_order(), fixtures::fail_case_spus(), cfg);
    EXPECT_EQ(r.solution.column_counts, (std::map<std::string, Quantity>{{"SPU2", 2}, {"SPU3", 1}}));
    EXPECT_TRUE(r.solution.heuristic_slack.empty());
    EXPECT_DOUBLE_EQ(r.solution.objective, 3.0);
    EXPECT_TRUE(packing_success(r.solution));
  }
}

TEST(ColGen, FailCasePricesColumnsIn) {
  // A one-column warm start forces the remaining SPUs through pricing.
  ColGenConfig cfg = pure();
  cfg.warm_start_size = 1;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    cfg.rng_seed = seed;
    const auto r = run_colgen(fixtures::fail_case_order(), fixtures::fail_case_spus(), cfg);
    EXPECT_DOUBLE_EQ(r.solution.objective, 3.0) << "seed " << seed;
    EXPECT_EQ(r.solution.column_counts.at("SPU2"), 2);
  }
}

TEST(ColGen, SmallInstancesReachBruteForceOptimum) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    const auto sc = fixtures::random_small_case(rng, 5, 10, 6);
    const auto cols = as_columns(sc.matched);
    const auto best = oracle::brute_force_ip(cols, demand_of(sc.order), costs_of(cols));
    const auto r = run_colgen(sc.order, sc.matched, pure());
    if (!best) {
      EXPECT_FALSE(packing_success(r.solution)) << "trial " << trial;
      continue;
    }
    ASSERT_TRUE(packing_success(r.solution)) << "trial " << trial;
    EXPECT_NEAR(r.solution.objective, best->objective, 1e-9) << "trial " << trial;
  }
}

TEST(ColGen, PricedRmpIsSolvedExactly) {
  // With a tiny warm start the final RMP is a strict subset of the matched
  // set; the integer step must still be optimal over that subset.
  std::mt19937_64 rng(59);
  ColGenConfig cfg = pure();
  cfg.warm_start_size = 2;
  for (int trial = 0; trial < 50; ++trial) {
    const auto sc = fixtures::random_small_case(rng, 5, 10, 6);
    cfg.rng_seed = static_cast<std::uint64_t>(trial);
    const auto r = run_colgen(sc.order, sc.matched, cfg);
    const auto& rmp = r.state.in_rmp;
    const auto sub = oracle::brute_force_ip(rmp, demand_of(sc.order), costs_of(rmp));
    ASSERT_TRUE(sub.has_value());  // slack columns keep the RMP feasible
    EXPECT_NEAR(r.solution.objective, sub->objective, 1e-9) << "trial " << trial;
    const auto cols = as_columns(sc.matched);
    const auto best = oracle::brute_force_ip(cols, demand_of(sc.order), costs_of(cols));
    if (best && packing_success(r.solution)) {
      EXPECT_GE(r.solution.objective, best->objective - 1e-9);
    }
  }
}

TEST(ColGen, LpObjectiveNeverIncreases) {
  std::mt19937_64 rng(61);
  for (const bool heuristic : {true, false}) {
    ColGenConfig cfg;
    cfg.heuristic_fallback = heuristic;
    cfg.warm_start_size = 3;
    for (int trial = 0; trial < 60; ++trial) {
      const auto sc = fixtures::random_small_case(rng, 5, 10, 8);
      cfg.rng_seed = static_cast<std::uint64_t>(trial);
      const auto r = run_colgen(sc.order, sc.matched, cfg);
      for (std::size_t i = 1; i < r.lp_objectives.size(); ++i) {
        EXPECT_LE(r.lp_objectives[i], r.lp_objectives[i - 1] + cfg.epsilon) << "trial " << trial;
      }
      EXPECT_LE(r.solution.objective, r.warm.solution.objective + 1e-9);
      EXPECT_TRUE(check_exact_cover(sc.order, r.solution).empty());
    }
  }
}

TEST(ColGen, GeneratedOrdersAreExactAndMonotone) {
  const auto ds = generate_dataset(40, 480, 3, DataProfile{});
  const auto idx = build_index(ds.history);
  for (const bool heuristic : {true, false}) {
    ColGenConfig cfg;
    cfg.heuristic_fallback = heuristic;
    for (const auto& o : ds.orders) {
      cfg.rng_seed = order_seed(1, o.id);
      const auto r = run_colgen(o, matched_spus(o, idx, false), cfg);
      EXPECT_TRUE(check_exact_cover(o, r.solution).empty()) << o.id;
      for (std::size_t i = 1; i < r.lp_objectives.size(); ++i) {
        EXPECT_LE(r.lp_objectives[i], r.lp_objectives[i - 1] + cfg.epsilon) << o.id;
      }
      EXPECT_LE(r.solution.objective, r.warm.solution.objective + 1e-9) << o.id;
      EXPECT_EQ(r.state.trace.size(), r.state.iteration);
    }
  }
}

TEST(ColGen, IterationLimitIsReported) {
  ColGenConfig cfg = pure();
  cfg.warm_start_size = 1;
  cfg.max_iters = 0;
  cfg.rng_seed = 0;
  // SPU1 alone is sampled under some seeds; search for one that needs pricing.
  bool seen = false;
  for (std::uint64_t seed = 0; seed < 16 && !seen; ++seed) {
    cfg.rng_seed = seed;
    const auto r = run_colgen(fixtures::fail_case_order(), fixtures::fail_case_spus(), cfg);
    if (r.hit_iteration_limit) {
      seen = true;
      EXPECT_EQ(r.solution.status, SolveStatus::kIterationLimit);
      EXPECT_TRUE(check_exact_cover(fixtures::fail_case_order(), r.solution).empty());
    }
  }
  EXPECT_TRUE(seen);
}

TEST(ColGen, SelectedLabelsReproduceFullRun) {
  const auto ds = generate_dataset(30, 360, 5, DataProfile{});
  const auto idx = build_index(ds.history);
  ColGenConfig cfg = pure();
  for (const auto& o : ds.orders) {
    cfg.rng_seed = order_seed(2, o.id);
    const auto m = matched_spus(o, idx, false);
    const RmpSetup setup = prepare_rmp(o, m, cfg);
    const auto full = run_colgen(o, setup, !m.empty(), cfg);
    std::vector<std::string> labels;
    for (const auto& e : full.state.trace) {
      for (const auto& a : e.admitted) labels.push_back(a.column_id);
    }
    const auto again = solve_with_selected(o, setup, labels, cfg);
    EXPECT_DOUBLE_EQ(again.solution.objective, full.solution.objective) << o.id;
    EXPECT_EQ(again.solution.column_counts, full.solution.column_counts) << o.id;
  }
}

TEST(ColGen, RejectsBadConfig) {
  ColGenConfig cfg;
  cfg.heuristic_capacity = 0;
  cfg.epsilon = 0.0;
  EXPECT_EQ(validate_config(cfg).size(), 2u);
}
