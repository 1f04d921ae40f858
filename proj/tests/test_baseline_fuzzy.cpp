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

#include "fixtures.hpp"
#include "spupack/baseline_fuzzy.hpp"
#include "spupack/colgen.hpp"
#include "spupack/datagen.hpp"
#include "spupack/matcher.hpp"

using namespace spupack;

TEST(Fuzzy, FailCaseStallsAfterGreedyPick) {
  const auto r = fuzzy_match_solve(fixtures::fail_case_order(), fixtures::fail_case_spus());
  EXPECT_FALSE(r.success);
  ASSERT_FALSE(r.picks.empty());
  EXPECT_EQ(r.picks.front(), "SPU1");
  EXPECT_FALSE(r.solution.has_value());
  EXPECT_EQ(r.remaining.at("B"), 1);
}

TEST(Fuzzy, ExactSingleMatch) {
  const auto r = fuzzy_match_solve(fixtures::order("o", {{"A", 1}}), std::vector<Spu>{fixtures::spu("s", {{"A", 1}})});
  EXPECT_TRUE(r.success);
  ASSERT_TRUE(r.solution.has_value());
  EXPECT_EQ(r.solution->column_counts.at("s"), 1);
  EXPECT_DOUBLE_EQ(r.solution->objective, 1.0);
}

TEST(Fuzzy, RepeatsAndTieBreaks) {
  // Equal coverage: "b" closes a type, so it wins over "a" despite the id.
  const Order o = fixtures::order("o", {{"A", 2}, {"B", 1}});
  const std::vector<Spu> m{fixtures::spu("a", {{"A", 1}}), fixtures::spu("b", {{"B", 1}})};
  const auto r = fuzzy_match_solve(o, m);
  ASSERT_TRUE(r.success);
  EXPECT_EQ(r.picks, (std::vector<std::string>{"b", "a", "a"}));
  EXPECT_EQ(r.solution->column_counts.at("a"), 2);
}

TEST(Fuzzy, NoMatchedFails) {
  const auto r = fuzzy_match_solve(fixtures::order("o", {{"A", 1}}), {});
  EXPECT_FALSE(r.success);
  EXPECT_TRUE(r.picks.empty());
}

TEST(Fuzzy, SuccessfulPlansAreExact) {
  const auto ds = generate_dataset(200, 2400, 21, DataProfile{});
  const auto idx = build_index(ds.history);
  std::size_t wins = 0;
  for (const auto& o : ds.orders) {
    const auto r = fuzzy_match_solve(o, matched_spus(o, idx, false));
    if (!r.success) continue;
    ++wins;
    EXPECT_TRUE(check_exact_cover(o, *r.solution).empty()) << o.id;
  }
  EXPECT_GT(wins, 0u);
}
