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
#include <set>

#include "fixtures.hpp"
#include "spupack/matcher.hpp"

using namespace spupack;
using fixtures::order;
using fixtures::spu;

namespace {

std::vector<std::string> ids(const std::vector<Spu>& spus) {
  std::vector<std::string> out;
  for (const auto& s : spus) out.push_back(s.id);
  return out;
}

// Straight per-SPU filter over the whole record.
std::vector<std::string> naive_matched(const Order& o, const HistoryRecord& r, bool relax) {
  std::map<ItemType, Quantity> demand;
  for (const auto& l : o.lines) demand[l.item_type] += l.quantity;
  std::set<std::string> out;
  for (const auto& s : r.spus) {
    if (!relax && s.demand_tag != o.demand_tag) continue;
    bool ok = true;
    for (const auto& l : s.lines) ok = ok && demand.count(l.item_type) && demand[l.item_type] >= l.quantity;
    if (ok) out.insert(s.id);
  }
  return {out.begin(), out.end()};
}

HistoryRecord random_record(std::mt19937_64& rng, std::size_t n) {
  HistoryRecord r;
  std::uniform_int_distribution<int> types(1, 4);
  std::uniform_int_distribution<int> item(0, 11);
  std::uniform_int_distribution<Quantity> qty(1, 6);
  std::bernoulli_distribution tagged(0.3);
  for (std::size_t i = 0; i < n; ++i) {
    Spu s;
    s.id = "s" + std::to_string(i);
    std::set<int> used;
    const int k = types(rng);
    while (static_cast<int>(used.size()) < k) used.insert(item(rng));
    for (int t : used) s.lines.push_back({"I" + std::to_string(t), qty(rng)});
    if (tagged(rng)) s.demand_tag = "T";
    r.spus.push_back(std::move(s));
  }
  return r;
}

}  // namespace

TEST(Index, EmptyRecord) {
  const auto idx = build_index(HistoryRecord{});
  EXPECT_TRUE(idx.by_item.empty());
  EXPECT_TRUE(idx.spus.empty());
}

TEST(Index, SingleSpu) {
  HistoryRecord r;
  r.spus = {spu("s1", {{"A", 1}, {"B", 2}})};
  const auto idx = build_index(r);
  EXPECT_EQ(idx.by_item.size(), 2u);
  EXPECT_EQ(idx.by_item.at("A"), std::set<std::string>{"s1"});
  EXPECT_EQ(idx.by_item.at("B"), std::set<std::string>{"s1"});
}

TEST(Index, DuplicateIdThrows) {
  HistoryRecord r;
  r.spus = {spu("s1", {{"A", 1}}), spu("s1", {{"B", 1}})};
  EXPECT_THROW(build_index(r), std::invalid_argument);
}

TEST(Index, PostingListsCoverAllIds) {
  std::mt19937_64 rng(5);
  const auto r = random_record(rng, 10000);
  const auto idx = build_index(r);
  std::set<std::string> all;
  for (const auto& [t, posting] : idx.by_item) all.insert(posting.begin(), posting.end());
  EXPECT_EQ(all.size(), r.spus.size());
}

TEST(Matched, TagAndSubsetExample) {
  const auto idx = build_index(fixtures::matching_history());
  EXPECT_EQ(ids(matched_spus(fixtures::matching_order(), idx, false)), std::vector<std::string>{"SPU1"});
}

TEST(Matched, EqualQuantityBoundary) {
  HistoryRecord r;
  r.spus = {spu("s", {{"A", 1}}, "T")};
  EXPECT_EQ(matched_spus(order("o", {{"A", 1}}, "T"), build_index(r), false).size(), 1u);
  EXPECT_TRUE(matched_spus(order("o", {{"A", 1}}, "U"), build_index(r), false).empty());
  EXPECT_EQ(matched_spus(order("o", {{"A", 1}}, "U"), build_index(r), true).size(), 1u);
}

TEST(Matched, AgreesWithNaiveFilter) {
  std::mt19937_64 rng(11);
  const auto r = random_record(rng, 1000);
  const auto idx = build_index(r);
  std::uniform_int_distribution<Quantity> qty(1, 10);
  for (int trial = 0; trial < 50; ++trial) {
    Order o;
    o.id = "o";
    for (int t = 0; t < 12; ++t) {
      if (rng() % 2) o.lines.push_back({"I" + std::to_string(t), qty(rng)});
    }
    if (o.lines.empty()) o.lines.push_back({"I0", 3});
    if (rng() % 3 == 0) o.demand_tag = "T";
    for (bool relax : {false, true}) {
      const auto got = ids(matched_spus(o, idx, relax));
      EXPECT_EQ(got, naive_matched(o, r, relax));
      EXPECT_TRUE(std::is_sorted(got.begin(), got.end()));
    }
  }
}

TEST(Matched, MonotoneInQuantityAndRelaxation) {
  std::mt19937_64 rng(13);
  const auto r = random_record(rng, 500);
  const auto idx = build_index(r);
  for (int trial = 0; trial < 30; ++trial) {
    Order o;
    o.id = "o";
    for (int t = 0; t < 8; ++t) o.lines.push_back({"I" + std::to_string(t), 1 + static_cast<Quantity>(rng() % 5)});
    const auto base = ids(matched_spus(o, idx, false));
    const auto relaxed = ids(matched_spus(o, idx, true));
    EXPECT_TRUE(std::includes(relaxed.begin(), relaxed.end(), base.begin(), base.end()));
    Order bigger = o;
    bigger.lines[rng() % bigger.lines.size()].quantity += 3;
    const auto grown = ids(matched_spus(bigger, idx, false));
    EXPECT_TRUE(std::includes(grown.begin(), grown.end(), base.begin(), base.end()));
  }
}
