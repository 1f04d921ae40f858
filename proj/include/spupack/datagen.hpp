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

// Synthetic orders and packing history.
//
// Orders: 1 + Poisson(mean_types - 1) distinct item types drawn from a Zipf
// popularity over the item universe; each quantity is geometric on {1,2,..}
// with mean mean_items / mean_types. History is built by fragmenting
// randomly chosen orders into 2-6 packed units, each of which is kept with
// `keep_probability`, so every history SPU is a matched SPU of its source.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "spupack/core_model.hpp"

namespace spupack {

struct DataProfile {
  std::string name = "standard";
  double mean_types = 5.64;
  double mean_items = 54.49;
  std::size_t item_universe = 200;
  double zipf_exponent = 1.0;
  // Fraction of orders carrying a special demand, spread over num_tags tags.
  double tag_probability = 0.2;
  std::size_t num_tags = 4;
  std::size_t min_fragments = 2;
  std::size_t max_fragments = 6;
  double keep_probability = 0.8;
  // Default history size per generated order.
  double history_per_order = 6.5;
};

inline DataProfile profile_by_name(const std::string& name) {
  DataProfile p;
  if (name == "standard") return p;
  if (name == "toy") {
    p.name = "toy";
    p.mean_types = 3.0;
    p.mean_items = 12.0;
    p.item_universe = 20;
    p.history_per_order = 6.0;
    return p;
  }
  throw std::invalid_argument("unknown profile " + name);
}

struct Dataset {
  std::vector<Order> orders;
  HistoryRecord history;
};

namespace detail {

inline std::string padded(const char* prefix, std::size_t n, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, n);
  return buf;
}

inline Order draw_order(std::mt19937_64& rng, const DataProfile& p,
                        std::discrete_distribution<std::size_t>& popularity, std::size_t index) {
  std::poisson_distribution<int> extra_types(std::max(0.0, p.mean_types - 1.0));
  const std::size_t d = std::min<std::size_t>(p.item_universe, 1 + static_cast<std::size_t>(extra_types(rng)));
  const double per_type = p.mean_items / p.mean_types;
  std::geometric_distribution<Quantity> extra_qty(1.0 / std::max(1.0, per_type));

  std::vector<std::size_t> types;
  while (types.size() < d) {
    const std::size_t t = popularity(rng);
    if (std::find(types.begin(), types.end(), t) == types.end()) types.push_back(t);
  }
  std::sort(types.begin(), types.end());
  Order o;
  o.id = padded("o", index, 6);
  for (const auto t : types) o.lines.push_back({padded("I", t, 3), 1 + extra_qty(rng)});
  std::bernoulli_distribution tagged(p.tag_probability);
  if (p.num_tags > 0 && tagged(rng)) {
    std::uniform_int_distribution<std::size_t> tag(1, p.num_tags);
    o.demand_tag = "T" + std::to_string(tag(rng));
  }
  return o;
}

// Splits `order` into k packed units; lines go whole to a random unit, or
// with probability 1/3 are divided between two units.
inline std::vector<ItemCounts> fragment(std::mt19937_64& rng, const Order& order, std::size_t k) {
  std::vector<ItemCounts> parts(k);
  std::uniform_int_distribution<std::size_t> which(0, k - 1);
  std::bernoulli_distribution split(1.0 / 3.0);
  for (const auto& line : order.lines) {
    if (line.quantity >= 2 && k >= 2 && split(rng)) {
      std::uniform_int_distribution<Quantity> cut(1, line.quantity - 1);
      const Quantity first = cut(rng);
      const std::size_t a = which(rng);
      std::size_t b = which(rng);
      while (b == a) b = which(rng);
      parts[a][line.item_type] += first;
      parts[b][line.item_type] += line.quantity - first;
    } else {
      parts[which(rng)][line.item_type] += line.quantity;
    }
  }
  std::erase_if(parts, [](const ItemCounts& c) { return c.empty(); });
  return parts;
}

}  // namespace detail

inline Dataset generate_dataset(std::size_t n_orders, std::size_t n_history_spus,
                                std::uint64_t rng_seed, const DataProfile& profile) {
  if (n_orders < 1) throw std::invalid_argument("n_orders must be >= 1");
  if (profile.item_universe < 1) throw std::invalid_argument("item universe must be nonempty");
  std::mt19937_64 rng(rng_seed);
  std::vector<double> weights(profile.item_universe);
  for (std::size_t r = 0; r < weights.size(); ++r) {
    weights[r] = 1.0 / std::pow(static_cast<double>(r + 1), profile.zipf_exponent);
  }
  std::discrete_distribution<std::size_t> popularity(weights.begin(), weights.end());

  Dataset ds;
  ds.orders.reserve(n_orders);
  for (std::size_t i = 0; i < n_orders; ++i) {
    ds.orders.push_back(detail::draw_order(rng, profile, popularity, i + 1));
  }

  ds.history.month = "history";
  std::uniform_int_distribution<std::size_t> pick_order(0, n_orders - 1);
  std::uniform_int_distribution<std::size_t> pieces(profile.min_fragments,
                                                    std::max(profile.min_fragments, profile.max_fragments));
  std::bernoulli_distribution keep(profile.keep_probability);
  // Bounded attempts so a degenerate keep_probability cannot loop forever.
  for (std::size_t attempt = 0; ds.history.spus.size() < n_history_spus && attempt < 100 * n_history_spus + 100;
       ++attempt) {
    const Order& source = ds.orders[pick_order(rng)];
    for (const ItemCounts& part : detail::fragment(rng, source, pieces(rng))) {
      if (!keep(rng) || ds.history.spus.size() >= n_history_spus) continue;
      Spu spu;
      spu.id = detail::padded("h", ds.history.spus.size() + 1, 7);
      for (const auto& [t, q] : part) spu.lines.push_back({t, q});
      spu.demand_tag = source.demand_tag;
      spu.source_month = ds.history.month;
      ds.history.spus.push_back(std::move(spu));
    }
  }
  return ds;
}

// Merges consecutive groups of K orders (after a seeded shuffle when K > 1)
// by summing quantities per item type. Demand tags are dropped.
inline std::vector<Order> combine_orders(const std::vector<Order>& orders, std::size_t k,
                                         std::uint64_t rng_seed) {
  if (k < 1) throw std::invalid_argument("K must be >= 1");
  std::vector<std::size_t> perm(orders.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  if (k > 1) {
    std::mt19937_64 rng(rng_seed);
    std::shuffle(perm.begin(), perm.end(), rng);
  }
  std::vector<Order> out;
  for (std::size_t g = 0; (g + 1) * k <= orders.size(); ++g) {
    ItemCounts total;
    std::string id;
    for (std::size_t i = 0; i < k; ++i) {
      const Order& o = orders[perm[g * k + i]];
      if (i) id += '+';
      id += o.id;
      for (const auto& l : o.lines) total[l.item_type] += l.quantity;
    }
    Order merged;
    merged.id = k == 1 ? id : "k" + std::to_string(k) + ":" + id;
    for (const auto& [t, q] : total) merged.lines.push_back({t, q});
    out.push_back(std::move(merged));
  }
  return out;
}

}  // namespace spupack
