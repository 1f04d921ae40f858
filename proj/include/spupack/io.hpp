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

// JSON Lines persistence for orders, SPUs and solutions.
//
// Order / Spu lines use the field names id, lines, demand_tag, cost, month.
// `lines` is an array of [item_type, quantity] pairs:
//
//   {"id":"o1","lines":[["A",2],["B",4]],"demand_tag":""}
//   {"id":"s9","lines":[["A",1]],"demand_tag":"","cost":1,"month":"2020-07"}

#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "spupack/core_model.hpp"

namespace spupack {

using Json = nlohmann::json;

// Raised for malformed input; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

inline Json lines_to_json(const std::vector<ItemLine>& lines) {
  Json out = Json::array();
  for (const auto& l : lines) out.push_back(Json::array({l.item_type, l.quantity}));
  return out;
}

inline std::vector<ItemLine> lines_from_json(const Json& j) {
  std::vector<ItemLine> lines;
  for (const auto& e : j.at("lines")) {
    if (!e.is_array() || e.size() != 2) throw std::invalid_argument("line entry must be [item_type, quantity]");
    lines.push_back({e.at(0).get<std::string>(), e.at(1).get<Quantity>()});
  }
  return lines;
}

inline Json to_json(const Order& o) {
  return Json{{"id", o.id}, {"lines", lines_to_json(o.lines)}, {"demand_tag", o.demand_tag}};
}

inline Json to_json(const Spu& s) {
  Json j{{"id", s.id}, {"lines", lines_to_json(s.lines)}, {"demand_tag", s.demand_tag}, {"cost", s.cost}};
  if (s.source_month) j["month"] = *s.source_month;
  return j;
}

inline Order order_from_json(const Json& j) {
  Order o;
  o.id = j.at("id").get<std::string>();
  o.lines = lines_from_json(j);
  o.demand_tag = j.value("demand_tag", std::string{});
  return o;
}

inline Spu spu_from_json(const Json& j) {
  Spu s;
  s.id = j.at("id").get<std::string>();
  s.lines = lines_from_json(j);
  s.demand_tag = j.value("demand_tag", std::string{});
  s.cost = j.value("cost", 1.0);
  if (j.contains("month")) s.source_month = j.at("month").get<std::string>();
  return s;
}

inline Provenance provenance_from_string(const std::string& s) {
  if (s == "matched-history") return Provenance::kMatchedHistory;
  if (s == "heuristic") return Provenance::kHeuristic;
  if (s == "artificial-slack") return Provenance::kArtificialSlack;
  throw std::invalid_argument("unknown provenance " + s);
}

inline SolveStatus status_from_string(const std::string& s) {
  if (s == "optimal") return SolveStatus::kOptimal;
  if (s == "feasible") return SolveStatus::kFeasible;
  if (s == "infeasible") return SolveStatus::kInfeasible;
  if (s == "iteration-limit") return SolveStatus::kIterationLimit;
  throw std::invalid_argument("unknown status " + s);
}

inline Json to_json(const Column& c) {
  Json j{{"id", c.id}, {"coeffs", c.coeffs}, {"cost", c.cost}, {"provenance", to_string(c.provenance)}};
  if (c.spu_ref) j["spu_ref"] = *c.spu_ref;
  return j;
}

inline Column column_from_json(const Json& j) {
  Column c;
  c.id = j.at("id").get<std::string>();
  c.coeffs = j.at("coeffs").get<ItemCounts>();
  c.cost = j.at("cost").get<double>();
  c.provenance = provenance_from_string(j.at("provenance").get<std::string>());
  if (j.contains("spu_ref")) c.spu_ref = j.at("spu_ref").get<std::string>();
  return c;
}

inline Json to_json(const Solution& s) {
  Json cols = Json::array();
  for (const auto& [id, c] : s.columns) cols.push_back(to_json(c));
  return Json{{"columns", cols},
              {"column_counts", s.column_counts},
              {"heuristic_slack", s.heuristic_slack},
              {"objective", s.objective},
              {"status", to_string(s.status)}};
}

inline Solution solution_from_json(const Json& j) {
  Solution s;
  for (const auto& c : j.at("columns")) {
    Column col = column_from_json(c);
    s.columns.emplace(col.id, std::move(col));
  }
  s.column_counts = j.at("column_counts").get<std::map<std::string, Quantity>>();
  s.heuristic_slack = j.at("heuristic_slack").get<ItemCounts>();
  s.objective = j.at("objective").get<double>();
  s.status = status_from_string(j.at("status").get<std::string>());
  return s;
}

// Reads one JSON value per nonblank line. Invalid JSON or a failing
// `convert` raises ParseError with the offending line number.
template <typename Convert>
auto read_jsonl(std::istream& in, Convert convert) {
  using T = decltype(convert(std::declval<const Json&>()));
  std::vector<T> out;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(convert(Json::parse(text)));
    } catch (const std::exception& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return out;
}

inline std::vector<Order> read_orders(std::istream& in) {
  auto orders = read_jsonl(in, order_from_json);
  return orders;
}

inline std::vector<Order> read_orders_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_orders(in);
}

inline HistoryRecord read_history(std::istream& in) {
  HistoryRecord record;
  record.spus = read_jsonl(in, spu_from_json);
  if (!record.spus.empty() && record.spus.front().source_month) {
    record.month = *record.spus.front().source_month;
  }
  return record;
}

inline HistoryRecord read_history_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_history(in);
}

inline void write_orders(std::ostream& out, const std::vector<Order>& orders) {
  for (const auto& o : orders) out << to_json(o).dump() << '\n';
}

inline void write_history(std::ostream& out, const HistoryRecord& record) {
  for (const auto& s : record.spus) out << to_json(s).dump() << '\n';
}

}  // namespace spupack
