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

// Candidate-column features for learned pricing, and the training instances
// emitted from full column-generation runs.
//
// Supports: rhs and dual statistics use only items the column contains;
// coefficient, to-demand and dual-times-coefficient statistics use every
// order item, so a column missing an item contributes a zero coefficient.

#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "spupack/colgen.hpp"
#include "spupack/core_model.hpp"

namespace spupack {

inline constexpr std::size_t kNumFeatures = 21;

inline constexpr std::array<std::string_view, kNumFeatures> kFeatureNames = {
    "reduced_cost",
    "rhs_min", "rhs_max", "rhs_mean",
    "dual_min", "dual_max", "dual_mean",
    "coeff_min", "coeff_max", "coeff_mean", "coeff_sum",
    "nonzero_coeff_count", "nonzero_coeff_min", "nonzero_coeff_mean",
    "to_demand_min", "to_demand_max", "to_demand_mean", "to_demand_sum",
    "dual_coeff_min", "dual_coeff_max", "dual_coeff_mean",
};

using FeatureVector = std::array<double, kNumFeatures>;

namespace detail {

struct RunningStats {
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  std::size_t count = 0;

  void add(double v) {
    min = std::min(min, v);
    max = std::max(max, v);
    sum += v;
    ++count;
  }
  double lo() const { return count ? min : 0.0; }
  double hi() const { return count ? max : 0.0; }
  double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }
};

}  // namespace detail

inline FeatureVector extract_features(const Column& column, const ItemCounts& rhs,
                                      const Duals& duals_iter0) {
  detail::RunningStats rhs_nz, dual_nz, coeff_all, coeff_nz, to_demand, dual_coeff;
  double reduced = column.cost;
  for (const auto& [type, q] : rhs) {
    const auto it = column.coeffs.find(type);
    const Quantity a = it == column.coeffs.end() ? 0 : it->second;
    const double pi = duals_iter0.at(type);
    const double ad = static_cast<double>(a);
    coeff_all.add(ad);
    to_demand.add(static_cast<double>(q - a));
    dual_coeff.add(pi * ad);
    if (a != 0) {
      rhs_nz.add(static_cast<double>(q));
      dual_nz.add(pi);
      coeff_nz.add(ad);
      reduced -= ad * pi;
    }
  }
  return {reduced,
          rhs_nz.lo(), rhs_nz.hi(), rhs_nz.mean(),
          dual_nz.lo(), dual_nz.hi(), dual_nz.mean(),
          coeff_all.lo(), coeff_all.hi(), coeff_all.mean(), coeff_all.sum,
          static_cast<double>(coeff_nz.count), coeff_nz.lo(), coeff_nz.mean(),
          to_demand.lo(), to_demand.hi(), to_demand.mean(), to_demand.sum,
          dual_coeff.lo(), dual_coeff.hi(), dual_coeff.mean()};
}

struct CandidateFeatures {
  std::string id;
  FeatureVector features{};

  friend bool operator==(const CandidateFeatures&, const CandidateFeatures&) = default;
};

struct TrainingInstance {
  std::string order_id;
  ItemCounts rhs;
  std::vector<std::string> initial_column_ids;
  std::vector<CandidateFeatures> candidates;
  std::vector<std::string> label;

  friend bool operator==(const TrainingInstance&, const TrainingInstance&) = default;
};

inline std::vector<CandidateFeatures> candidate_features(const RmpSetup& setup,
                                                         const ItemCounts& rhs) {
  std::vector<CandidateFeatures> out;
  out.reserve(setup.candidates.size());
  for (const Column& c : setup.candidates) {
    out.push_back({c.id, extract_features(c, rhs, setup.initial_duals)});
  }
  return out;
}

// Labels are the columns admitted by the full run, in admission order.
inline TrainingInstance make_training_instance(const Order& order, const RmpSetup& setup,
                                               const ColGenResult& run) {
  TrainingInstance inst;
  inst.order_id = order.id;
  inst.rhs = demand_of(order);
  for (const Column& c : setup.in_rmp) inst.initial_column_ids.push_back(c.id);
  inst.candidates = candidate_features(setup, inst.rhs);
  for (const auto& entry : run.state.trace) {
    for (const auto& a : entry.admitted) inst.label.push_back(a.column_id);
  }
  return inst;
}

inline nlohmann::json candidates_to_json(const std::vector<CandidateFeatures>& cands) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : cands) {
    arr.push_back({{"id", c.id}, {"features", std::vector<double>(c.features.begin(), c.features.end())}});
  }
  return arr;
}

inline std::vector<CandidateFeatures> candidates_from_json(const nlohmann::json& arr) {
  std::vector<CandidateFeatures> out;
  for (const auto& c : arr) {
    CandidateFeatures cf;
    cf.id = c.at("id").get<std::string>();
    const auto f = c.at("features").get<std::vector<double>>();
    if (f.size() != kNumFeatures) throw std::invalid_argument("feature vector must have 21 entries");
    std::copy(f.begin(), f.end(), cf.features.begin());
    out.push_back(std::move(cf));
  }
  return out;
}

inline nlohmann::json to_json(const TrainingInstance& t) {
  return {{"order_id", t.order_id},
          {"rhs", t.rhs},
          {"initial_column_ids", t.initial_column_ids},
          {"candidates", candidates_to_json(t.candidates)},
          {"label", t.label}};
}

inline TrainingInstance training_instance_from_json(const nlohmann::json& j) {
  TrainingInstance t;
  t.order_id = j.at("order_id").get<std::string>();
  t.rhs = j.at("rhs").get<ItemCounts>();
  t.initial_column_ids = j.at("initial_column_ids").get<std::vector<std::string>>();
  t.candidates = candidates_from_json(j.at("candidates"));
  t.label = j.at("label").get<std::vector<std::string>>();
  return t;
}

// Empty iff every label id is a candidate id.
inline std::vector<std::string> validate_instance(const TrainingInstance& t) {
  std::vector<std::string> v;
  std::set<std::string> ids;
  for (const auto& c : t.candidates) ids.insert(c.id);
  for (const auto& l : t.label) {
    if (!ids.contains(l)) v.push_back("label " + l + " is not a candidate");
  }
  return v;
}

}  // namespace spupack
