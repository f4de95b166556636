#pragma once
//------------------------------------------------------------------------------
//
//   Copyright 2026 The Clinch Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------
//
// File formats. An instance is one flat JSON object tagged by `kind`; an
// outcome is the allocation matrix, the divisibility flag, the payment vector
// and a `meta` block recording how it was produced. Numbers round-trip at full
// binary64 precision (shortest-decimal encoding that reparses to the same
// bits).

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

#include <json.hpp>

#include "clinch/certificates.hpp"
#include "clinch/checkers.hpp"
#include "clinch/core.hpp"

namespace clinch {

using json = nlohmann::json;

using AnyInstance = std::variant<SingleItemInstance, SingleDimInstance, MultiDimInstance>;

struct OutcomeMeta {
  std::string mechanism;
  std::optional<std::uint64_t> seed;
  std::map<std::string, double> tolerances;
};

// ---- instances

inline json to_json(const SingleItemInstance& inst) {
  return json{{"kind", "single_item"}, {"budgets", inst.budgets}, {"valuations", inst.valuations}};
}

inline json to_json(const SingleDimInstance& inst) {
  return json{{"kind", "single_dim"},
              {"alphas", inst.alphas},
              {"budgets", inst.budgets},
              {"valuations", inst.valuations}};
}

inline json to_json(const MultiDimInstance& inst) {
  return json{{"kind", "multi_dim"}, {"budgets", inst.budgets}, {"valuations", inst.valuations}};
}

inline json to_json(const AnyInstance& inst) {
  return std::visit([](const auto& x) { return to_json(x); }, inst);
}

inline AnyInstance instance_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "single_item") {
    SingleItemInstance inst;
    inst.budgets = j.at("budgets").get<std::vector<double>>();
    inst.valuations = j.at("valuations").get<std::vector<double>>();
    validate_instance(inst);
    return inst;
  }
  if (kind == "single_dim") {
    SingleDimInstance inst;
    inst.alphas = j.at("alphas").get<std::vector<double>>();
    inst.budgets = j.at("budgets").get<std::vector<double>>();
    inst.valuations = j.at("valuations").get<std::vector<double>>();
    validate_instance(inst);
    return inst;
  }
  if (kind == "multi_dim") {
    MultiDimInstance inst;
    inst.budgets = j.at("budgets").get<std::vector<double>>();
    inst.valuations = j.at("valuations").get<std::vector<std::vector<double>>>();
    validate_instance(inst);
    return inst;
  }
  throw std::invalid_argument("unknown instance kind: " + kind);
}

// ---- outcomes

inline json to_json(const Outcome& out, const OutcomeMeta& meta = {}) {
  json j{{"allocation", out.allocation.x},
         {"divisible", out.allocation.divisibility == Divisibility::divisible},
         {"payments", out.payments}};
  json m;
  if (!meta.mechanism.empty()) m["mechanism"] = meta.mechanism;
  if (meta.seed) m["seed"] = *meta.seed;
  if (!meta.tolerances.empty()) m["tolerances"] = meta.tolerances;
  j["meta"] = m;
  return j;
}

inline Outcome outcome_from_json(const json& j) {
  Outcome out;
  out.allocation.x = j.at("allocation").get<std::vector<std::vector<double>>>();
  out.allocation.divisibility =
      j.value("divisible", true) ? Divisibility::divisible : Divisibility::indivisible;
  out.payments = j.at("payments").get<std::vector<double>>();
  if (out.allocation.agents() != out.agents())
    throw std::invalid_argument("outcome: allocation/payment size mismatch");
  return out;
}

// ---- property reports

inline json to_json(const Witness& w) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, AgentWitness>) {
          return json{{"type", "agent"}, {"agent", x.agent}, {"value", x.value}};
        } else if constexpr (std::is_same_v<T, AuctioneerWitness>) {
          return json{{"type", "auctioneer"}, {"payment_sum", x.payment_sum}};
        } else if constexpr (std::is_same_v<T, UnassignedItemWitness>) {
          return json{{"type", "unassigned_item"}, {"item", x.item}, {"column_sum", x.column_sum}};
        } else if constexpr (std::is_same_v<T, TradeWitness>) {
          return json{{"type", "trade"},
                      {"alt_allocation", x.alt_allocation},
                      {"deltas", x.deltas},
                      {"value_gain", x.value_gain},
                      {"compensation", x.compensation}};
        } else if constexpr (std::is_same_v<T, PairWitness>) {
          return json{{"type", "pair"},
                      {"winner", x.winner},
                      {"richer", x.richer},
                      {"payment", x.payment},
                      {"budget", x.budget}};
        } else if constexpr (std::is_same_v<T, MonotonicityWitness>) {
          return json{{"type", "monotonicity"}, {"agent", x.agent},   {"v_low", x.v_low},
                      {"v_high", x.v_high},     {"q_low", x.q_low},   {"q_high", x.q_high}};
        } else if constexpr (std::is_same_v<T, PaymentWitness>) {
          return json{{"type", "payment"},
                      {"agent", x.agent},
                      {"report", x.report},
                      {"expected", x.expected},
                      {"actual", x.actual}};
        } else if constexpr (std::is_same_v<T, WmonWitness>) {
          return json{{"type", "wmon"},
                      {"agent", x.agent},
                      {"valuations", x.valuations},
                      {"valuations_prime", x.valuations_prime},
                      {"allocation_row", x.row},
                      {"allocation_row_prime", x.row_prime},
                      {"lhs", x.lhs},
                      {"rhs", x.rhs}};
        } else {
          json j{{"type", "misreport"},
                 {"agent", x.agent},
                 {"true_valuation", x.true_valuation},
                 {"reported_valuation", x.reported_valuation},
                 {"truthful_utility", x.truthful_utility},
                 {"misreport_utility", x.misreport_utility}};
          if (x.reported_budget) j["reported_budget"] = *x.reported_budget;
          return j;
        }
      },
      w);
}

inline json to_json(const PropertyReport& r) {
  return json{{"property", r.property},
              {"verdict", to_string(r.verdict)},
              {"detail", r.detail},
              {"witness", to_json(r.witness)},
              {"params", r.params}};
}

// ---- certificates

inline json to_json(const CaseClassification& c) {
  json preds = json::array();
  for (const auto& p : c.predicates) preds.push_back({{"predicate", p.name}, {"satisfied", p.satisfied}});
  return json{{"label", to_string(c.label)}, {"predicates", preds}};
}

inline json to_json(const Certificate& cert) {
  json steps = json::array();
  for (const auto& s : cert.steps)
    steps.push_back({{"claim", s.claim}, {"lhs", s.lhs}, {"rhs", s.rhs}, {"satisfied", s.satisfied}});
  return json{{"instance", to_json(cert.instance)},
              {"alpha", cert.alpha},
              {"beta", cert.beta},
              {"v21_perturbed", cert.v21_perturbed},
              {"v22_perturbed", cert.v22_perturbed},
              {"forced_x12", cert.forced_x12},
              {"forced_x12_perturbed", cert.forced_x12_perturbed},
              {"forced_p1", cert.forced_p1},
              {"bound", cert.bound},
              {"steps", steps},
              {"contradiction", cert.contradiction}};
}

inline json to_json(const BoundReport& rep) {
  json bounds = json::array();
  for (const auto& b : rep.bounds) {
    json items = json::array();
    for (int j : b.items) items.push_back(j + 1);  // 1-based item names in reports
    bounds.push_back({{"items", items},
                      {"payment_lower_bound", b.payment_lower_bound},
                      {"ir_cap", b.ir_cap},
                      {"exceeds_cap", b.exceeds_cap}});
  }
  return json{{"critical_lower_bound", rep.critical_lower_bound},
              {"window", {rep.window_low, rep.window_high}},
              {"window_nonempty", rep.window_nonempty},
              {"chosen_v1", rep.chosen_v1},
              {"bounds", bounds},
              {"ir_conflict", rep.ir_conflict}};
}

// ---- files

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  json j;
  in >> j;
  return j;
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace clinch
