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
// Mechanized arithmetic behind the two impossibility arguments on 2x2
// instances: the case classification and the outcomes any IR+PO+IC mechanism
// is forced to produce; the weak-monotonicity contradiction certificate for
// multi-dimensional valuations; and the payment-lower-bound chain for
// single-dimensional valuations with two items. The nonexistence claims
// themselves are not experiments - these routines certify the inequalities an
// instance induces.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "clinch/core.hpp"

namespace clinch {

enum class CaseLabel { case1, case2, case3, unclassified };

inline const char* to_string(CaseLabel c) {
  switch (c) {
    case CaseLabel::case1: return "case1";
    case CaseLabel::case2: return "case2";
    case CaseLabel::case3: return "case3";
    default: return "unclassified";
  }
}

struct PredicateResult {
  std::string name;
  bool satisfied = false;
};

struct CaseClassification {
  CaseLabel label = CaseLabel::unclassified;
  std::vector<PredicateResult> predicates;  // defining predicates of each case
};

namespace detail {

struct TwoByTwo {
  double v11, v12, v21, v22, b1, b2;
};

inline TwoByTwo unpack_2x2(const MultiDimInstance& inst) {
  if (inst.agents() != 2 || inst.items() != 2)
    throw std::invalid_argument("expected exactly 2 agents and 2 items");
  return {inst.valuations[0][0], inst.valuations[0][1],
          inst.valuations[1][0], inst.valuations[1][1],
          inst.budgets[0],       inst.budgets[1]};
}

}  // namespace detail

/// Labels a 2x2 instance by the defining predicates of the three cases.
/// The cases are mutually exclusive when all comparisons are strict.
inline CaseClassification classify_case(const MultiDimInstance& inst) {
  const auto t = detail::unpack_2x2(inst);
  CaseClassification c;

  const bool rich2 = t.b2 > t.v21 + t.v22;
  const std::vector<std::pair<std::string, bool>> all = {
      {"v11 < v21", t.v11 < t.v21},
      {"v11 > v21", t.v11 > t.v21},
      {"v12 < v22", t.v12 < t.v22},
      {"v12 > v22", t.v12 > t.v22},
      {"b1 > v11", t.b1 > t.v11},
      {"v11*v22 > v12*v21", t.v11 * t.v22 > t.v12 * t.v21},
      {"v21 + v22 > b1", t.v21 + t.v22 > t.b1},
      {"b2 > v21 + v22", rich2},
  };

  const auto pick = [&](std::initializer_list<const char*> names) {
    std::vector<PredicateResult> out;
    for (const char* n : names)
      for (const auto& p : all)
        if (p.first == n) out.push_back({p.first, p.second});
    return out;
  };
  const auto holds_all = [](const std::vector<PredicateResult>& ps) {
    for (const auto& p : ps)
      if (!p.satisfied) return false;
    return true;
  };

  auto c1 = pick({"v11 < v21", "v12 < v22", "b2 > v21 + v22"});
  auto c2 = pick({"v11 > v21", "v12 < v22", "b1 > v11", "b2 > v21 + v22"});
  auto c3 = pick({"v11 > v21", "v12 > v22", "b1 > v11", "v11*v22 > v12*v21",
                  "v21 + v22 > b1", "b2 > v21 + v22"});

  if (holds_all(c1)) {
    c.label = CaseLabel::case1;
    c.predicates = std::move(c1);
  } else if (holds_all(c2)) {
    c.label = CaseLabel::case2;
    c.predicates = std::move(c2);
  } else if (holds_all(c3)) {
    c.label = CaseLabel::case3;
    c.predicates = std::move(c3);
  } else {
    c.label = CaseLabel::unclassified;
    for (const auto& p : all) c.predicates.push_back({p.first, p.second});
  }
  return c;
}

/// Allocation plus only the payments the case analysis pins down.
struct PartialOutcome {
  Allocation allocation;
  std::vector<std::optional<double>> payments;
};

/// The outcome every IR, PO and IC mechanism must produce in the given case.
/// Case 1: agent 2 takes both items, agent 1 pays nothing. Case 2: the split
/// assignment with p1 = v21. Case 3: agent 1 takes item 1 and the fraction
/// x12 = (b1 - v21)/v22 of item 2, spending his whole budget. Payments the
/// analysis does not force (p2 throughout) stay absent.
///
/// The instance must satisfy the comparison pattern and budget constraints the
/// case's formulas rest on; the label is otherwise taken at face value, so the
/// map can be evaluated at perturbed reports along a contradiction argument.
inline PartialOutcome forced_outcome(const MultiDimInstance& inst, CaseLabel label) {
  const auto t = detail::unpack_2x2(inst);
  PartialOutcome out;
  out.allocation = Allocation::zeros(2, 2, Divisibility::divisible);
  out.payments.assign(2, std::nullopt);

  const auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("forced_outcome: needs ") + what);
  };
  switch (label) {
    case CaseLabel::case1:
      require(t.v21 > t.v11 && t.v22 > t.v12, "v21 > v11 and v22 > v12");
      require(t.b2 > t.v21 + t.v22, "b2 > v21 + v22");
      out.allocation.x = {{0.0, 0.0}, {1.0, 1.0}};
      out.payments[0] = 0.0;
      return out;
    case CaseLabel::case2:
      require(t.v11 > t.v21 && t.v22 > t.v12, "v11 > v21 and v22 > v12");
      require(t.b1 > t.v11 && t.b2 > t.v21 + t.v22, "b1 > v11 and b2 > v21 + v22");
      out.allocation.x = {{1.0, 0.0}, {0.0, 1.0}};
      out.payments[0] = t.v21;
      return out;
    case CaseLabel::case3: {
      require(t.v11 > t.v21 && t.v12 > t.v22 && t.v22 > 0.0, "v11 > v21 and v12 > v22 > 0");
      require(t.b1 > t.v11 && t.v21 + t.v22 > t.b1, "v11 < b1 < v21 + v22");
      require(t.b2 > t.v21 + t.v22, "b2 > v21 + v22");
      const double x12 = (t.b1 - t.v21) / t.v22;
      out.allocation.x = {{1.0, x12}, {0.0, 1.0 - x12}};
      out.payments[0] = t.b1;
      return out;
    }
    default:
      throw std::invalid_argument("forced_outcome: instance is unclassified");
  }
}

struct CertificateStep {
  std::string claim;
  double lhs = 0.0, rhs = 0.0;  // claim: lhs > rhs (or as described)
  bool satisfied = false;
};

/// The weak-monotonicity contradiction on a Case-3 instance: agent 2 reports
/// v21+alpha, v22-beta (overstating one item, understating the other). WMON
/// forces the perturbed x12 to not fall, which needs b1 >= B(alpha, beta) =
/// (v21 beta + v22 alpha)/beta; but alpha > beta gives B > v21 + v22 > b1.
struct Certificate {
  MultiDimInstance instance;
  double alpha = 0.0, beta = 0.0;
  double v21_perturbed = 0.0, v22_perturbed = 0.0;
  double forced_x12 = 0.0;            // (b1 - v21)/v22
  double forced_x12_perturbed = 0.0;  // (b1 - v21')/v22'
  double forced_p1 = 0.0;             // b1
  double bound = 0.0;                 // B(alpha, beta)
  std::vector<CertificateStep> steps;
  bool contradiction = false;
};

inline Certificate wmon_certificate(const MultiDimInstance& inst, double alpha, double beta) {
  const auto t = detail::unpack_2x2(inst);
  if (!(alpha > beta && beta > 0.0))
    throw std::invalid_argument("wmon_certificate: need alpha > beta > 0");
  if (classify_case(inst).label != CaseLabel::case3)
    throw std::invalid_argument("wmon_certificate: instance is not in case 3");

  // The perturbed report must keep agent 2 below agent 1 on both items and
  // keep agent 2 unconstrained, so the forced-outcome formulas stay in play.
  const double v21p = t.v21 + alpha;
  const double v22p = t.v22 - beta;
  const std::vector<std::pair<std::string, bool>> required = {
      {"v11 > v21'", t.v11 > v21p},
      {"v12 > v22'", t.v12 > v22p},
      {"v22' > 0", v22p > 0.0},
      {"b2 > v21' + v22'", t.b2 > v21p + v22p},
  };
  std::string failed;
  for (const auto& p : required)
    if (!p.second) failed += (failed.empty() ? "" : ", ") + p.first;
  if (!failed.empty())
    throw std::invalid_argument("wmon_certificate: perturbation leaves case 3 (" + failed + ")");

  Certificate cert;
  cert.instance = inst;
  cert.alpha = alpha;
  cert.beta = beta;
  cert.v21_perturbed = v21p;
  cert.v22_perturbed = v22p;
  cert.forced_x12 = (t.b1 - t.v21) / t.v22;
  cert.forced_x12_perturbed = (t.b1 - cert.v21_perturbed) / cert.v22_perturbed;
  cert.forced_p1 = t.b1;
  cert.bound = (t.v21 * beta + t.v22 * alpha) / beta;

  // WMON requires x12' >= x12, equivalently b1 >= B; the forced outcomes give
  // x12' < x12, so the mechanism would need b1 >= B.
  cert.steps.push_back({"forced x12' < x12 (WMON would require x12' >= x12, i.e. b1 >= B)",
                        cert.forced_x12_perturbed, cert.forced_x12,
                        cert.forced_x12_perturbed < cert.forced_x12});
  cert.steps.push_back({"B > v21 + v22 (from alpha > beta)", cert.bound, t.v21 + t.v22,
                        cert.bound > t.v21 + t.v22});
  cert.steps.push_back({"v21 + v22 > b1 (case 3 predicate)", t.v21 + t.v22, t.b1,
                        t.v21 + t.v22 > t.b1});

  cert.contradiction = true;
  for (const auto& s : cert.steps) cert.contradiction = cert.contradiction && s.satisfied;
  return cert;
}

/// Payment lower bounds for the two-item single-dimensional construction.
struct PaymentBound {
  std::vector<int> items;            // the nonempty set S (0-based indices)
  double payment_lower_bound = 0.0;  // (sum_{j in S} alpha_j / alpha_2) [b1 - (alpha_1-alpha_2) v2]
  double ir_cap = 0.0;               // v1 * sum_{j in S} alpha_j
  bool exceeds_cap = false;
};

struct BoundReport {
  double critical_lower_bound = 0.0;  // (1/alpha_2)[b1 - (alpha_1 - alpha_2) v2]
  double window_low = 0.0, window_high = 0.0;  // admissible truthful v1: (v2, bound)
  bool window_nonempty = false;
  double chosen_v1 = 0.0;
  std::vector<PaymentBound> bounds;  // S = {2}, {1}, {1,2} under 1-based item names
  bool ir_conflict = false;          // every bound exceeds its IR cap at chosen_v1
};

/// Evaluates the lower-bound chain: the critical valuation for winning item 2
/// exceeds (1/alpha_2)[b1 - (alpha_1 - alpha_2) v2] (base payment <= 0), hence
/// the payment for any nonempty item set S exceeds (sum_S alpha / alpha_2)
/// [b1 - (alpha_1 - alpha_2) v2]; for any truthful v1 inside the window these
/// bounds exceed the IR caps v1 * sum_S alpha.
inline BoundReport singdim_bounds(const std::vector<double>& alphas, double v2, double b1,
                                  std::optional<double> v1 = std::nullopt) {
  if (alphas.size() != 2) throw std::invalid_argument("singdim_bounds: need exactly two qualities");
  const double a1 = alphas[0], a2 = alphas[1];
  if (!(a1 > a2 && a2 > 0.0))
    throw std::invalid_argument("singdim_bounds: need alpha_1 > alpha_2 > 0");
  if (!(v2 > 0.0)) throw std::invalid_argument("singdim_bounds: need v2 > 0");

  BoundReport rep;
  rep.critical_lower_bound = (b1 - (a1 - a2) * v2) / a2;
  rep.window_low = v2;
  rep.window_high = rep.critical_lower_bound;
  rep.window_nonempty = rep.window_high > rep.window_low;  // equivalent to b1 > alpha_1 v2

  if (!rep.window_nonempty) {
    rep.chosen_v1 = v1.value_or(0.0);
    return rep;  // no conflict claim without an admissible truthful valuation
  }

  rep.chosen_v1 = v1.value_or(0.5 * (rep.window_low + rep.window_high));
  if (!(rep.chosen_v1 > rep.window_low && rep.chosen_v1 < rep.window_high))
    throw std::invalid_argument("singdim_bounds: v1 must lie inside the window");

  const std::vector<std::vector<int>> sets = {{1}, {0}, {0, 1}};  // {2}, {1}, {1,2} 1-based
  rep.ir_conflict = true;
  for (const auto& S : sets) {
    PaymentBound pb;
    pb.items = S;
    double alpha_sum = 0.0;
    for (int j : S) alpha_sum += alphas[static_cast<std::size_t>(j)];
    pb.payment_lower_bound = (alpha_sum / a2) * (b1 - (a1 - a2) * v2);
    pb.ir_cap = rep.chosen_v1 * alpha_sum;
    pb.exceeds_cap = pb.payment_lower_bound > pb.ir_cap;
    rep.ir_conflict = rep.ir_conflict && pb.exceeds_cap;
    rep.bounds.push_back(pb);
  }
  return rep;
}

}  // namespace clinch
