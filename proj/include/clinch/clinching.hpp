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
// Adaptive clinching auction for a single divisible item.
//
// An ascending price clock sells one divisible unit to budget-constrained
// bidders. At price p an active bidder demands b_i/p. A bidder clinches
// (irrevocably buys at the current price) whenever the other bidders'
// aggregate demand falls below the remaining supply. Between events the
// clinching bidders' budgets follow a differential process whose break
// points have the closed forms implemented in compute_break_point; at a
// bidder's valuation the bidder exits and the remaining bidders absorb the
// demand drop at the frozen price. The clock stops once aggregate demand no
// longer exceeds supply and the remainder is cleared at the final price.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "clinch/core.hpp"

namespace clinch {

enum class AgentPhase {
  active,   // still bidding: valuation above the current price
  exiting,  // hit its valuation at the current price, not yet processed
  out       // removed (processed exit, or never participated)
};

/// Live state of one auction run.
struct AuctionState {
  std::vector<double> initial_budgets;
  std::vector<double> budgets;    // remaining money
  std::vector<double> allocated;  // fractions clinched so far
  std::vector<AgentPhase> phase;
  std::vector<char> clinching;  // members of C (subset of the active set)
  double price = 0.0;
  double supply = 1.0;
  double demand = std::numeric_limits<double>::infinity();  // sum of active demands; +inf at p = 0

  int agents() const { return static_cast<int>(budgets.size()); }

  bool is_active(int i) const { return phase[static_cast<std::size_t>(i)] == AgentPhase::active; }
  bool is_exiting(int i) const { return phase[static_cast<std::size_t>(i)] == AgentPhase::exiting; }
  bool in_clinch_set(int i) const { return clinching[static_cast<std::size_t>(i)] != 0; }

  std::vector<int> active_set() const {
    std::vector<int> r;
    for (int i = 0; i < agents(); ++i)
      if (is_active(i)) r.push_back(i);
    return r;
  }
  std::vector<int> exiting_set() const {
    std::vector<int> r;
    for (int i = 0; i < agents(); ++i)
      if (is_exiting(i)) r.push_back(i);
    return r;
  }
  std::vector<int> clinch_set() const {
    std::vector<int> r;
    for (int i = 0; i < agents(); ++i)
      if (is_active(i) && in_clinch_set(i)) r.push_back(i);
    return r;
  }

  double active_budget_sum() const {
    double s = 0.0;
    for (int i = 0; i < agents(); ++i)
      if (is_active(i)) s += budgets[static_cast<std::size_t>(i)];
    return s;
  }

  void recompute_demand() {
    if (price <= 0.0) {
      demand = active_set().empty() ? 0.0 : std::numeric_limits<double>::infinity();
      return;
    }
    demand = active_budget_sum() / price;
  }

  /// C = { i active : demand of the others <= supply, within tolerance }.
  void recompute_clinch_set() {
    std::fill(clinching.begin(), clinching.end(), 0);
    if (price <= 0.0) return;
    const double tol = kFeasibilityTol * std::max(1.0, supply);
    for (int i = 0; i < agents(); ++i) {
      if (!is_active(i)) continue;
      const double others = demand - budgets[static_cast<std::size_t>(i)] / price;
      if (others <= supply + tol) clinching[static_cast<std::size_t>(i)] = 1;
    }
  }
};

/// Next break point of the differential process; requires a nonempty clinch set.
struct BreakPoint {
  enum class Trigger { new_clincher, valuation_exit };
  double next_price = 0.0;            // p~
  double next_supply = 0.0;           // S~
  double next_clincher_budget = 0.0;  // b~, the common budget of the clinchers at p~
  Trigger trigger = Trigger::new_clincher;
};

namespace detail {

inline double min_active_valuation(const AuctionState& st, const std::vector<double>& valuations) {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < st.agents(); ++i)
    if (st.is_active(i)) m = std::min(m, valuations[static_cast<std::size_t>(i)]);
  return m;
}

/// Moves every active agent with v_i <= price into the exiting set.
inline void mark_exits(AuctionState& st, const std::vector<double>& valuations) {
  for (int i = 0; i < st.agents(); ++i)
    if (st.is_active(i) && valuations[static_cast<std::size_t>(i)] <= st.price) {
      st.phase[static_cast<std::size_t>(i)] = AgentPhase::exiting;
      st.clinching[static_cast<std::size_t>(i)] = 0;
    }
}

/// C <- argmax over active budgets. All maximizers join; a relative band
/// absorbs the rounding between a crosser's budget b* and the clinchers'
/// recomputed b~, which are equal in exact arithmetic.
inline void clinch_set_from_argmax(AuctionState& st) {
  std::fill(st.clinching.begin(), st.clinching.end(), 0);
  double best = -1.0;
  for (int i = 0; i < st.agents(); ++i)
    if (st.is_active(i)) best = std::max(best, st.budgets[static_cast<std::size_t>(i)]);
  if (best < 0.0) return;
  const double band = kFeasibilityTol * std::max(1.0, best);
  for (int i = 0; i < st.agents(); ++i)
    if (st.is_active(i) && st.budgets[static_cast<std::size_t>(i)] >= best - band)
      st.clinching[static_cast<std::size_t>(i)] = 1;
}

}  // namespace detail

inline BreakPoint compute_break_point(const AuctionState& st, const std::vector<double>& valuations) {
  const auto cs = st.clinch_set();
  if (cs.empty()) throw InternalError("compute_break_point: empty clinch set");
  if (st.price <= 0.0) throw InternalError("compute_break_point: zero price with nonempty clinch set");

  const int k = static_cast<int>(cs.size());
  double b_c = 0.0;  // common clincher budget (maximal active budget)
  for (int i : cs) b_c = std::max(b_c, st.budgets[static_cast<std::size_t>(i)]);
  double b_star = 0.0;       // largest budget outside C (0 when A \ C is empty)
  double sum_others = 0.0;   // total budget outside C
  for (int i = 0; i < st.agents(); ++i) {
    if (!st.is_active(i) || st.in_clinch_set(i)) continue;
    b_star = std::max(b_star, st.budgets[static_cast<std::size_t>(i)]);
    sum_others += st.budgets[static_cast<std::size_t>(i)];
  }

  const double min_v = detail::min_active_valuation(st, valuations);
  BreakPoint bp;

  if (st.supply <= 1e-14) {
    // Nothing left to sell: the clock jumps to the next exit.
    bp.next_price = std::max(st.price, min_v);
    bp.next_supply = st.supply;
    bp.next_clincher_budget = b_c;
    bp.trigger = BreakPoint::Trigger::valuation_exit;
    return bp;
  }

  // Price at which the largest non-clinching budget would start to clinch.
  double p_star = std::numeric_limits<double>::infinity();
  if (k == 1) {
    if (sum_others > 0.0) p_star = st.price * std::exp((b_c - b_star) / sum_others);
  } else {
    const double denom = (k - 1) * b_star + sum_others;
    if (denom > 0.0)
      p_star = st.price * std::pow(st.price * st.supply / denom, 1.0 / (k - 1));
  }

  bp.next_price = std::max(st.price, std::min(p_star, min_v));
  bp.trigger = (min_v <= bp.next_price) ? BreakPoint::Trigger::valuation_exit
                                        : BreakPoint::Trigger::new_clincher;
  bp.next_supply = std::pow(st.price / bp.next_price, k) * st.supply;
  if (k == 1) {
    bp.next_clincher_budget = b_c - std::log(bp.next_price / st.price) * sum_others;
  } else {
    bp.next_clincher_budget =
        (st.supply * std::pow(st.price, k) / std::pow(bp.next_price, k - 1) - sum_others) / (k - 1);
  }
  bp.next_clincher_budget = std::max(bp.next_clincher_budget, 0.0);
  return bp;
}

/// One pass of the overdemanded clock while no exit is pending. With an empty
/// clinch set the price advances to the first event (a bidder starts clinching
/// or the lowest active valuation is reached); with a nonempty clinch set the
/// differential segment runs to its break point, crediting each clinching
/// bidder an equal share of the sold supply.
inline void continuous_clinching(AuctionState& st, const std::vector<double>& valuations) {
  if (!st.exiting_set().empty()) throw InternalError("continuous_clinching: exit pending");
  if (!(st.demand > st.supply)) throw InternalError("continuous_clinching: not overdemanded");

  const auto cs = st.clinch_set();
  if (cs.empty()) {
    // Highest price at which nobody has clinched or exited yet.
    const auto active = st.active_set();
    if (active.empty()) throw InternalError("continuous_clinching: no active bidders");
    double sum = 0.0, best = 0.0;
    for (int i : active) {
      sum += st.budgets[static_cast<std::size_t>(i)];
      best = std::max(best, st.budgets[static_cast<std::size_t>(i)]);
    }
    double p_star = std::numeric_limits<double>::infinity();
    if (st.supply > 0.0) p_star = (sum - best) / st.supply;
    const double min_v = detail::min_active_valuation(st, valuations);
    st.price = std::max(st.price, std::min(p_star, min_v));
    detail::mark_exits(st, valuations);
    st.recompute_demand();
    st.recompute_clinch_set();
    return;
  }

  const BreakPoint bp = compute_break_point(st, valuations);
  const double gain = (st.supply - bp.next_supply) / static_cast<double>(cs.size());
  for (int i : cs) {
    st.allocated[static_cast<std::size_t>(i)] += gain;
    st.budgets[static_cast<std::size_t>(i)] = bp.next_clincher_budget;
  }
  st.price = bp.next_price;
  st.supply = bp.next_supply;
  detail::mark_exits(st, valuations);
  detail::clinch_set_from_argmax(st);
  st.recompute_demand();
}

/// Absorbs pending exits at the frozen price: in decreasing remaining-budget
/// order each active bidder clinches the gap between the supply and the other
/// bidders' demand, until every gap is closed. Gaps are invariant under the
/// other bidders' purchases, so one sweep settles the state in exact
/// arithmetic; the loop repeats only to flush rounding residue.
inline void handle_exiting(AuctionState& st) {
  if (st.exiting_set().empty()) throw InternalError("handle_exiting: no exit pending");
  if (st.price <= 0.0) throw InternalError("handle_exiting: zero price");

  for (int i = 0; i < st.agents(); ++i)
    if (st.is_exiting(i)) st.phase[static_cast<std::size_t>(i)] = AgentPhase::out;

  constexpr double kGapTol = 1e-12;
  const int n = st.agents();
  for (int pass = 0; pass < n + 2; ++pass) {
    auto order = st.active_set();
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const double ba = st.budgets[static_cast<std::size_t>(a)];
      const double bb = st.budgets[static_cast<std::size_t>(b)];
      if (ba != bb) return ba > bb;
      return a < b;
    });
    bool progressed = false;
    for (int i : order) {
      double others = 0.0;
      for (int j : st.active_set())
        if (j != i) others += st.budgets[static_cast<std::size_t>(j)];
      others /= st.price;
      double gap = st.supply - others;
      if (gap <= kGapTol) continue;
      gap = std::min({gap, st.supply, st.budgets[static_cast<std::size_t>(i)] / st.price});
      st.allocated[static_cast<std::size_t>(i)] += gap;
      // The product can round one ulp past the remaining money.
      st.budgets[static_cast<std::size_t>(i)] =
          std::max(0.0, st.budgets[static_cast<std::size_t>(i)] - gap * st.price);
      st.supply -= gap;
      progressed = true;
    }
    if (!progressed) break;
  }

  st.recompute_demand();
  st.recompute_clinch_set();
}

/// Clears the market once demand no longer exceeds supply: active bidders buy
/// their full demand, then the bidders that exited at the final price buy the
/// leftovers (largest remaining budget first, lower index on ties).
inline Outcome final_sale(AuctionState& st) {
  if (st.demand > st.supply) throw InternalError("final_sale: still overdemanded");
  if (st.demand > 0.0 && st.price <= 0.0) throw InternalError("final_sale: zero price with demand");

  st.supply -= st.demand;
  for (int i : st.active_set()) {
    const auto ii = static_cast<std::size_t>(i);
    if (st.budgets[ii] > 0.0) {
      st.allocated[ii] += st.budgets[ii] / st.price;
      st.budgets[ii] = 0.0;
    }
  }
  auto leftovers = st.exiting_set();
  std::sort(leftovers.begin(), leftovers.end(), [&](int a, int b) {
    const double ba = st.budgets[static_cast<std::size_t>(a)];
    const double bb = st.budgets[static_cast<std::size_t>(b)];
    if (ba != bb) return ba > bb;
    return a < b;
  });
  for (int i : leftovers) {
    const auto ii = static_cast<std::size_t>(i);
    if (st.supply <= 0.0) break;
    const double q = std::min(st.budgets[ii] / st.price, st.supply);
    st.allocated[ii] += q;
    st.budgets[ii] = std::max(0.0, st.budgets[ii] - q * st.price);
    st.supply -= q;
    st.phase[ii] = AgentPhase::out;
  }

  const int n = st.agents();
  Outcome out;
  out.allocation = Allocation::zeros(n, 1, Divisibility::divisible);
  out.payments.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    out.allocation.x[ii][0] = st.allocated[ii];
    out.payments[ii] = st.initial_budgets[ii] - st.budgets[ii];
  }
  return out;
}

using StateObserver = std::function<void(const AuctionState&)>;

/// Runs the auction. Bidders with zero budget or zero valuation are removed up
/// front (allocated nothing, pay nothing). Reported valuations may tie:
/// simultaneous exits are processed together and budget ties share the clinch
/// set, which keeps the run deterministic.
inline Outcome clinching_auction(const SingleItemInstance& inst, const StateObserver& observer = {}) {
  const int n = inst.agents();
  if (static_cast<int>(inst.valuations.size()) != n)
    throw std::invalid_argument("budgets/valuations length mismatch");
  if (n < 2) throw std::invalid_argument("need at least two agents");
  for (int i = 0; i < n; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    if (!std::isfinite(inst.budgets[ii]) || !std::isfinite(inst.valuations[ii]) ||
        inst.budgets[ii] < 0.0 || inst.valuations[ii] < 0.0)
      throw std::invalid_argument("budgets and valuations must be finite and nonnegative");
  }

  std::vector<int> participants;
  for (int i = 0; i < n; ++i)
    if (inst.budgets[static_cast<std::size_t>(i)] > 0.0 &&
        inst.valuations[static_cast<std::size_t>(i)] > 0.0)
      participants.push_back(i);

  if (participants.empty()) {
    Outcome out;
    out.allocation = Allocation::zeros(n, 1, Divisibility::divisible);
    out.payments.assign(static_cast<std::size_t>(n), 0.0);
    return out;
  }
  if (participants.size() == 1) {
    // A lone bidder faces no competing demand and clinches everything as the
    // clock starts, at price zero.
    Outcome out;
    out.allocation = Allocation::zeros(n, 1, Divisibility::divisible);
    out.payments.assign(static_cast<std::size_t>(n), 0.0);
    out.allocation.x[static_cast<std::size_t>(participants.front())][0] = 1.0;
    return out;
  }

  AuctionState st;
  st.initial_budgets = inst.budgets;
  st.budgets = inst.budgets;
  st.allocated.assign(static_cast<std::size_t>(n), 0.0);
  st.phase.assign(static_cast<std::size_t>(n), AgentPhase::out);
  st.clinching.assign(static_cast<std::size_t>(n), 0);
  for (int i : participants) st.phase[static_cast<std::size_t>(i)] = AgentPhase::active;
  st.recompute_demand();
  if (observer) observer(st);

  int guard = 4 * n * n + 8;
  while (st.demand > st.supply) {
    if (--guard < 0) throw InternalError("clinching_auction: iteration guard exceeded");
    if (st.exiting_set().empty())
      continuous_clinching(st, inst.valuations);
    else
      handle_exiting(st);
    if (observer) observer(st);
  }
  return final_sale(st);
}

}  // namespace clinch
