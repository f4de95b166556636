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
// Executable forms of the outcome and mechanism properties: individual
// rationality, no positive transfers, the no-trade test for Pareto optimality
// of indivisible outcomes (exact, by enumeration), the structural sufficient
// condition for divisible outcomes, value monotonicity, the payment identity,
// weak monotonicity, and brute-force incentive compatibility on report grids.
// Every `violated` verdict carries a witness that re-verifies against the raw
// defining inequality with no checker state.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "clinch/clinching.hpp"
#include "clinch/core.hpp"
#include "clinch/hetero.hpp"
#include "clinch/rng.hpp"

namespace clinch {

enum class Verdict { holds, violated, inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::violated: return "violated";
    default: return "inconclusive";
  }
}

// ---------------------------------------------------------------------------
// Witnesses

struct AgentWitness {
  int agent = -1;
  double value = 0.0;  // the offending utility / payment
};

struct AuctioneerWitness {
  double payment_sum = 0.0;
};

struct UnassignedItemWitness {
  int item = -1;
  double column_sum = 0.0;
};

/// An alternative assignment whose winners can compensate the losers.
struct TradeWitness {
  std::vector<std::vector<double>> alt_allocation;
  std::vector<double> deltas;  // delta_i = sum_j (x'_{i,j} - x_{i,j}) alpha_j
  double value_gain = 0.0;     // sum_i delta_i v_i
  double compensation = 0.0;   // sum_W min(b_i - p_i, delta_i v_i) + sum_L delta_i v_i
};

/// A winner and a higher-valuation agent whose budget is not exhausted.
struct PairWitness {
  int winner = -1;
  int richer = -1;
  double payment = 0.0;
  double budget = 0.0;
};

struct MonotonicityWitness {
  int agent = -1;
  double v_low = 0.0, v_high = 0.0;
  double q_low = 0.0, q_high = 0.0;  // aggregate qualities; q_high < q_low
};

struct PaymentWitness {
  int agent = -1;
  double report = 0.0;
  double expected = 0.0;  // payment-identity reconstruction
  double actual = 0.0;
};

struct WmonWitness {
  int agent = -1;
  std::vector<double> valuations, valuations_prime;
  std::vector<double> row, row_prime;  // the two allocations of the agent
  double lhs = 0.0, rhs = 0.0;         // violated: lhs < rhs
};

struct MisreportWitness {
  int agent = -1;
  double true_valuation = 0.0;
  double reported_valuation = 0.0;
  std::optional<double> reported_budget;
  double truthful_utility = 0.0;
  double misreport_utility = 0.0;
};

using Witness = std::variant<std::monostate, AgentWitness, AuctioneerWitness, UnassignedItemWitness,
                             TradeWitness, PairWitness, MonotonicityWitness, PaymentWitness,
                             WmonWitness, MisreportWitness>;

struct PropertyReport {
  std::string property;
  Verdict verdict = Verdict::inconclusive;
  std::string detail;
  Witness witness;
  std::map<std::string, double> params;

  bool holds() const { return verdict == Verdict::holds; }
  bool violated() const { return verdict == Verdict::violated; }
};

// ---------------------------------------------------------------------------
// Mechanism evaluation hooks

/// A single-dimensional direct-revelation mechanism: full report vectors in,
/// outcome out. Implementations accept arbitrary nonnegative reports
/// (unsorted, possibly tied) so checkers can probe misreports.
using SingleDimMechanismFn =
    std::function<Outcome(const std::vector<double>& valuations, const std::vector<double>& budgets)>;

/// Allocation rule of a multi-dimensional mechanism (payments not needed for
/// weak monotonicity).
using MultiDimAllocationFn = std::function<Allocation(const MultiDimInstance&)>;

inline SingleDimMechanismFn hetero_divisible_mechanism(std::vector<double> alphas) {
  return [alphas = std::move(alphas)](const std::vector<double>& v, const std::vector<double>& b) {
    SingleDimInstance inst;
    inst.alphas = alphas;
    inst.valuations = v;
    inst.budgets = b;
    return run_hetero_divisible(inst);
  };
}

inline SingleDimMechanismFn single_item_clinching_mechanism() {
  return [](const std::vector<double>& v, const std::vector<double>& b) {
    return clinching_auction(SingleItemInstance{b, v});
  };
}

/// Single-item instances checked as the m = 1, alpha = (1) special case.
inline SingleDimInstance as_single_dim(const SingleItemInstance& inst) {
  return SingleDimInstance{{1.0}, inst.valuations, inst.budgets};
}

/// 50-point geometric grid over (hi * lo_ratio, hi], ascending.
inline std::vector<double> geometric_grid(double hi, int points = 50, double lo_ratio = 1e-3) {
  if (points < 2 || !(hi > 0.0) || !(lo_ratio > 0.0 && lo_ratio < 1.0))
    throw std::invalid_argument("geometric_grid: bad parameters");
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k)
    g[static_cast<std::size_t>(k)] =
        hi * std::pow(lo_ratio, static_cast<double>(points - 1 - k) / (points - 1));
  g.back() = hi;
  return g;
}

// ---------------------------------------------------------------------------
// Outcome properties

template <typename Instance>
PropertyReport check_ir(const Instance& inst, const Outcome& out, double tol = kPropertyTol) {
  PropertyReport r;
  r.property = "ir";
  r.params["tol"] = tol;
  for (int i = 0; i < out.agents(); ++i) {
    const double u = utility(inst, out, i);
    if (!(u >= -tol)) {
      r.verdict = Verdict::violated;
      r.detail = "agent " + std::to_string(i) + " has negative utility";
      r.witness = AgentWitness{i, u};
      return r;
    }
  }
  double sum = 0.0;
  for (double p : out.payments) sum += p;
  if (sum < -tol) {
    r.verdict = Verdict::violated;
    r.detail = "auctioneer receives negative total payment";
    r.witness = AuctioneerWitness{sum};
    return r;
  }
  r.verdict = Verdict::holds;
  return r;
}

inline PropertyReport check_npt(const Outcome& out, double tol = kPropertyTol) {
  PropertyReport r;
  r.property = "npt";
  r.params["tol"] = tol;
  for (int i = 0; i < out.agents(); ++i) {
    if (out.payments[static_cast<std::size_t>(i)] < -tol) {
      r.verdict = Verdict::violated;
      r.detail = "agent " + std::to_string(i) + " is paid by the mechanism";
      r.witness = AgentWitness{i, out.payments[static_cast<std::size_t>(i)]};
      return r;
    }
  }
  r.verdict = Verdict::holds;
  return r;
}

namespace detail {

/// delta, value gain and compensation of one alternative assignment.
struct TradeEvaluation {
  std::vector<double> deltas;
  double value_gain = 0.0;
  double compensation = 0.0;
};

inline TradeEvaluation evaluate_trade(const SingleDimInstance& inst, const Outcome& out,
                                      const std::vector<std::vector<double>>& alt) {
  const int n = inst.agents();
  const int m = inst.items();
  TradeEvaluation ev;
  ev.deltas.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double d = 0.0;
    for (int j = 0; j < m; ++j)
      d += (alt[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
            out.allocation.x[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) *
           inst.alphas[static_cast<std::size_t>(j)];
    ev.deltas[static_cast<std::size_t>(i)] = d;
    const double dv = d * inst.valuations[static_cast<std::size_t>(i)];
    ev.value_gain += dv;
    if (d > 0.0)
      ev.compensation += std::min(inst.budgets[static_cast<std::size_t>(i)] -
                                      out.payments[static_cast<std::size_t>(i)],
                                  dv);
    else
      ev.compensation += dv;
  }
  return ev;
}

}  // namespace detail

/// Re-evaluates a no-trade witness against the raw defining inequalities.
inline bool reverify_nt_witness(const SingleDimInstance& inst, const Outcome& out,
                                const TradeWitness& w, double tol = kPropertyTol) {
  const auto ev = detail::evaluate_trade(inst, out, w.alt_allocation);
  return ev.value_gain > tol && ev.compensation >= -tol;
}

/// Exact Pareto-optimality decision for indivisible outcomes via the no-trade
/// condition: (a) every item fully assigned, (b) no alternative assignment
/// raises total value while the gainers can compensate the losers within their
/// budget slack. Alternatives are scanned in order of (number of reassigned
/// items, lexicographic), so the witness is a minimal beneficial trade.
inline PropertyReport check_nt_indivisible(const SingleDimInstance& inst, const Outcome& out,
                                           int item_cap = 8, double tol = kPropertyTol) {
  PropertyReport r;
  r.property = "po-nt";
  r.params["tol"] = tol;
  r.params["cap"] = item_cap;

  const int n = inst.agents();
  const int m = inst.items();
  if (out.allocation.divisibility != Divisibility::indivisible)
    throw std::invalid_argument("check_nt_indivisible: outcome is not indivisible");
  if (out.allocation.agents() != n || out.allocation.items() != m || out.agents() != n)
    throw std::invalid_argument("check_nt_indivisible: dimension mismatch");
  if (const auto feasible = validate_allocation(out.allocation); !feasible.ok)
    throw std::invalid_argument("check_nt_indivisible: " + feasible.message);
  for (int i = 0; i < n; ++i)
    if (out.payments[static_cast<std::size_t>(i)] > inst.budgets[static_cast<std::size_t>(i)] + tol)
      throw std::invalid_argument("check_nt_indivisible: outcome exceeds a budget");

  double space = 1.0;
  for (int j = 0; j < m; ++j) space *= n + 1;
  if (m > item_cap || space > 4.0e6) {
    r.verdict = Verdict::inconclusive;
    r.detail = "assignment space too large (m over cap)";
    return r;
  }

  // Condition (a).
  for (int j = 0; j < m; ++j) {
    const double s = out.allocation.column_sum(j);
    if (std::abs(s - 1.0) > tol) {
      r.verdict = Verdict::violated;
      r.detail = "item " + std::to_string(j) + " not fully assigned";
      r.witness = UnassignedItemWitness{j, s};
      return r;
    }
  }

  // Baseline assignment digits: 0 = unassigned, i+1 = agent i.
  std::vector<int> base(static_cast<std::size_t>(m), 0);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i)
      if (out.allocation.x[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] >= 0.5) {
        base[static_cast<std::size_t>(j)] = i + 1;
        break;
      }

  const auto total = static_cast<std::uint64_t>(space);
  std::vector<std::uint8_t> dist(total, 0);
  std::vector<int> digits(static_cast<std::size_t>(m), 0);
  const auto decode = [&](std::uint64_t code) {
    for (int j = m - 1; j >= 0; --j) {
      digits[static_cast<std::size_t>(j)] = static_cast<int>(code % (n + 1));
      code /= (n + 1);
    }
  };
  for (std::uint64_t c = 0; c < total; ++c) {
    decode(c);
    int d = 0;
    for (int j = 0; j < m; ++j)
      if (digits[static_cast<std::size_t>(j)] != base[static_cast<std::size_t>(j)]) ++d;
    dist[c] = static_cast<std::uint8_t>(d);
  }

  std::vector<double> delta(static_cast<std::size_t>(n), 0.0);
  for (int d = 1; d <= m; ++d) {
    for (std::uint64_t c = 0; c < total; ++c) {
      if (dist[c] != d) continue;
      decode(c);
      std::fill(delta.begin(), delta.end(), 0.0);
      for (int j = 0; j < m; ++j) {
        const int to = digits[static_cast<std::size_t>(j)];
        const int from = base[static_cast<std::size_t>(j)];
        if (to == from) continue;
        if (to > 0) delta[static_cast<std::size_t>(to - 1)] += inst.alphas[static_cast<std::size_t>(j)];
        if (from > 0) delta[static_cast<std::size_t>(from - 1)] -= inst.alphas[static_cast<std::size_t>(j)];
      }
      double gain = 0.0, comp = 0.0;
      for (int i = 0; i < n; ++i) {
        const double dv = delta[static_cast<std::size_t>(i)] * inst.valuations[static_cast<std::size_t>(i)];
        gain += dv;
        if (delta[static_cast<std::size_t>(i)] > 0.0)
          comp += std::min(inst.budgets[static_cast<std::size_t>(i)] -
                               out.payments[static_cast<std::size_t>(i)],
                           dv);
        else
          comp += dv;
      }
      if (gain > tol && comp >= -tol) {
        TradeWitness w;
        w.alt_allocation.assign(static_cast<std::size_t>(n),
                                std::vector<double>(static_cast<std::size_t>(m), 0.0));
        for (int j = 0; j < m; ++j)
          if (digits[static_cast<std::size_t>(j)] > 0)
            w.alt_allocation[static_cast<std::size_t>(digits[static_cast<std::size_t>(j)] - 1)]
                            [static_cast<std::size_t>(j)] = 1.0;
        w.deltas = delta;
        w.value_gain = gain;
        w.compensation = comp;
        r.verdict = Verdict::violated;
        r.detail = "beneficial trade exists (" + std::to_string(d) + " items reassigned)";
        r.witness = std::move(w);
        return r;
      }
    }
  }

  r.verdict = Verdict::holds;
  r.detail = "exact: no-trade holds, outcome is Pareto optimal";
  return r;
}

/// Violation search for divisible outcomes: tries single-item transfers on a
/// fraction ladder plus seeded random multi-item perturbations. Sound for
/// `violated` (the witness re-verifies); otherwise `inconclusive`, never
/// `holds` (the fractional trade space is not enumerable).
inline PropertyReport check_nt_divisible_search(const SingleDimInstance& inst, const Outcome& out,
                                                int trials = 2000, std::uint64_t seed = 1,
                                                double tol = kPropertyTol) {
  PropertyReport r;
  r.property = "po-nt";
  r.params["tol"] = tol;
  r.params["trials"] = trials;

  const int n = inst.agents();
  const int m = inst.items();
  for (int j = 0; j < m; ++j) {
    const double s = out.allocation.column_sum(j);
    if (s < 1.0 - tol) {
      r.verdict = Verdict::violated;
      r.detail = "item " + std::to_string(j) + " not fully assigned";
      r.witness = UnassignedItemWitness{j, s};
      return r;
    }
  }

  const auto try_alt = [&](const std::vector<std::vector<double>>& alt) -> bool {
    const auto ev = detail::evaluate_trade(inst, out, alt);
    if (ev.value_gain > tol && ev.compensation >= -tol) {
      TradeWitness w;
      w.alt_allocation = alt;
      w.deltas = ev.deltas;
      w.value_gain = ev.value_gain;
      w.compensation = ev.compensation;
      r.verdict = Verdict::violated;
      r.detail = "beneficial fractional trade found";
      r.witness = std::move(w);
      return true;
    }
    return false;
  };

  const double ladder[] = {1.0, 0.5, 0.25, 0.125};
  for (int from = 0; from < n; ++from)
    for (int to = 0; to < n; ++to) {
      if (from == to) continue;
      for (int j = 0; j < m; ++j) {
        const double held = out.allocation.x[static_cast<std::size_t>(from)][static_cast<std::size_t>(j)];
        if (held <= tol) continue;
        for (double f : ladder) {
          auto alt = out.allocation.x;
          alt[static_cast<std::size_t>(from)][static_cast<std::size_t>(j)] -= f * held;
          alt[static_cast<std::size_t>(to)][static_cast<std::size_t>(j)] += f * held;
          if (try_alt(alt)) return r;
        }
      }
    }

  rng::Stream stream(seed);
  for (int t = 0; t < trials; ++t) {
    auto alt = out.allocation.x;
    const int moves = 1 + stream.next_int(0, 2);
    for (int k = 0; k < moves; ++k) {
      const int from = stream.next_int(0, n - 1);
      const int to = stream.next_int(0, n - 1);
      const int j = stream.next_int(0, m - 1);
      if (from == to) continue;
      const double held = alt[static_cast<std::size_t>(from)][static_cast<std::size_t>(j)];
      if (held <= tol) continue;
      const double f = stream.next_uniform() * held;
      alt[static_cast<std::size_t>(from)][static_cast<std::size_t>(j)] -= f;
      alt[static_cast<std::size_t>(to)][static_cast<std::size_t>(j)] += f;
    }
    if (try_alt(alt)) return r;
  }

  r.verdict = Verdict::inconclusive;
  r.detail = "no violating trade found; fractional no-trade is not decided exactly";
  return r;
}

/// Sufficient condition for Pareto optimality of single-dimensional outcomes:
/// (a) every item fully assigned and (b) whenever some agent wins anything,
/// every agent with a strictly higher valuation has an exhausted budget.
/// `holds` implies PO; `violated` only means the sufficient condition failed.
inline PropertyReport check_structural_po(const SingleDimInstance& inst, const Outcome& out,
                                          double tol = kPropertyTol) {
  PropertyReport r;
  r.property = "po-structural";
  r.params["tol"] = tol;

  const int n = inst.agents();
  const int m = inst.items();
  for (int j = 0; j < m; ++j) {
    const double s = out.allocation.column_sum(j);
    if (std::abs(s - 1.0) > tol) {
      r.verdict = Verdict::violated;
      r.detail = "condition (a): item " + std::to_string(j) + " not fully assigned";
      r.witness = UnassignedItemWitness{j, s};
      return r;
    }
  }
  for (int w = 0; w < n; ++w) {
    double won = 0.0;
    for (int j = 0; j < m; ++j) won += out.allocation.x[static_cast<std::size_t>(w)][static_cast<std::size_t>(j)];
    if (!(won > 0.0)) continue;
    for (int rcher = 0; rcher < n; ++rcher) {
      if (inst.valuations[static_cast<std::size_t>(rcher)] <= inst.valuations[static_cast<std::size_t>(w)])
        continue;
      const double pay = out.payments[static_cast<std::size_t>(rcher)];
      const double bud = inst.budgets[static_cast<std::size_t>(rcher)];
      if (pay < bud - tol) {
        r.verdict = Verdict::violated;
        r.detail = "condition (b): sufficient condition failed (not a PO decision)";
        r.witness = PairWitness{w, rcher, pay, bud};
        return r;
      }
    }
  }
  r.verdict = Verdict::holds;
  r.detail = "sufficient condition met; outcome is Pareto optimal";
  return r;
}

// ---------------------------------------------------------------------------
// Mechanism properties

/// Aggregate quality did not step monotonically in the report sweep.
struct VmViolationError : std::runtime_error {
  MonotonicityWitness witness;
  explicit VmViolationError(MonotonicityWitness w)
      : std::runtime_error("aggregate quality decreases in the report"), witness(w) {}
};

/// Breakpoints of an agent's aggregate-quality staircase, with the critical
/// reports where each level is first reached and the payment at report 0.
struct CriticalValuationProfile {
  std::vector<double> levels;     // gamma_0 < gamma_1 < ... (size = criticals.size() + 1)
  std::vector<double> criticals;  // c_1 <= c_2 <= ...
  double base_payment = 0.0;
  bool continuous_region = false;  // sweep hit a non-step (continuous) stretch
  double bisect_width = 0.0;
};

/// Sweeps agent `agent`'s report over [0, v_max] and localizes each jump of
/// the aggregate quality by bisection to width `tol`. Reports that produce a
/// continuously varying quality (no staircase) set `continuous_region`; a
/// quality decrease throws VmViolationError.
inline CriticalValuationProfile find_critical_valuations(
    const SingleDimMechanismFn& mech, const std::vector<double>& alphas,
    const std::vector<double>& valuations, const std::vector<double>& budgets, int agent,
    double v_max, double tol = kPaymentIdentityTol, int sweep_points = 50, int max_levels = 64) {
  if (!(v_max > 0.0) || !(tol > 0.0)) throw std::invalid_argument("find_critical_valuations: bad parameters");

  const double q_scale = std::max(1.0, total_quality(alphas));
  const double q_tol = 1e-9 * q_scale;
  const double jump_min = 1e-7 * q_scale;

  const auto q_at = [&](double v) {
    auto reports = valuations;
    reports[static_cast<std::size_t>(agent)] = v;
    const Outcome o = mech(reports, budgets);
    return aggregate_quality(o.allocation.x[static_cast<std::size_t>(agent)], alphas);
  };

  CriticalValuationProfile prof;
  prof.bisect_width = tol;
  {
    auto reports = valuations;
    reports[static_cast<std::size_t>(agent)] = 0.0;
    prof.base_payment = mech(reports, budgets).payments[static_cast<std::size_t>(agent)];
  }

  double current_q = q_at(0.0);
  double at_current = 0.0;  // a report known to produce current_q
  prof.levels.push_back(current_q);

  for (int s = 1; s <= sweep_points; ++s) {
    const double v_next = v_max * static_cast<double>(s) / sweep_points;
    double q_next = q_at(v_next);
    if (q_next < current_q - q_tol)
      throw VmViolationError({agent, at_current, v_next, current_q, q_next});

    while (q_next > current_q + q_tol) {
      // Bisect the first departure from the current level.
      double lo = at_current, hi = v_next, q_hi = q_next;
      while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double qm = q_at(mid);
        if (qm < current_q - q_tol) throw VmViolationError({agent, lo, mid, current_q, qm});
        if (qm <= current_q + q_tol) {
          lo = mid;
        } else {
          hi = mid;
          q_hi = qm;
        }
      }
      if (q_hi - current_q < jump_min) {
        prof.continuous_region = true;
        return prof;
      }
      prof.levels.push_back(q_hi);
      prof.criticals.push_back(0.5 * (lo + hi));  // true crossing within half a width
      if (static_cast<int>(prof.criticals.size()) >= max_levels) {
        prof.continuous_region = true;
        return prof;
      }
      current_q = q_hi;
      at_current = hi;
      if (q_next <= current_q + q_tol) break;
    }
    if (std::abs(q_next - current_q) <= q_tol) at_current = v_next;
  }
  return prof;
}

/// Convenience form: the probed agent's budget plus the other agents' types in
/// index order (the probed slot is spliced back in at `agent`).
inline CriticalValuationProfile find_critical_valuations(
    const SingleDimMechanismFn& mech, const std::vector<double>& alphas, int agent, double budget,
    const std::vector<AgentType>& others, double v_max, double tol = kPaymentIdentityTol) {
  std::vector<double> valuations, budgets;
  valuations.reserve(others.size() + 1);
  budgets.reserve(others.size() + 1);
  for (const auto& o : others) {
    valuations.push_back(o.valuation);
    budgets.push_back(o.budget);
  }
  valuations.insert(valuations.begin() + agent, 0.0);
  budgets.insert(budgets.begin() + agent, budget);
  return find_critical_valuations(mech, alphas, valuations, budgets, agent, v_max, tol);
}

/// Value monotonicity: a higher report never lowers the aggregate quality.
/// Each agent's report sweeps the grid with the others held at the instance.
inline PropertyReport check_vm(const SingleDimMechanismFn& mech, const SingleDimInstance& inst,
                               const std::vector<double>& grid, double tol = kPropertyTol) {
  PropertyReport r;
  r.property = "vm";
  r.params["tol"] = tol;
  r.params["grid"] = static_cast<double>(grid.size());

  for (int agent = 0; agent < inst.agents(); ++agent) {
    std::vector<double> q(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
      auto reports = inst.valuations;
      reports[static_cast<std::size_t>(agent)] = grid[g];
      const Outcome o = mech(reports, inst.budgets);
      q[g] = aggregate_quality(o.allocation.x[static_cast<std::size_t>(agent)], inst.alphas);
    }
    for (std::size_t a = 0; a < grid.size(); ++a)
      for (std::size_t b = a + 1; b < grid.size(); ++b)
        if (q[b] < q[a] - tol) {
          r.verdict = Verdict::violated;
          r.detail = "aggregate quality decreases for agent " + std::to_string(agent);
          r.witness = MonotonicityWitness{agent, grid[a], grid[b], q[a], q[b]};
          return r;
        }
  }
  r.verdict = Verdict::holds;
  return r;
}

/// Payment identity: at every grid report, the payment equals the base payment
/// plus sum (gamma_s - gamma_{s-1}) * c_s over the levels reached. Exact only
/// for staircase allocations; continuous stretches yield `inconclusive`.
inline PropertyReport check_pi(const SingleDimMechanismFn& mech, const SingleDimInstance& inst,
                               const std::vector<double>& grid, double tol = kPaymentIdentityTol,
                               double bisect_tol = 0.0) {
  PropertyReport r;
  r.property = "pi";
  // Reconstruction error is bounded by the total level mass times the bisection
  // width, so the width scales down with the total quality.
  if (bisect_tol <= 0.0) bisect_tol = tol / (2.0 * std::max(1.0, total_quality(inst.alphas)));
  r.params["tol"] = tol;
  r.params["bisect_tol"] = bisect_tol;
  r.params["grid"] = static_cast<double>(grid.size());

  const double v_max = grid.empty() ? 1.0 : *std::max_element(grid.begin(), grid.end());

  for (int agent = 0; agent < inst.agents(); ++agent) {
    CriticalValuationProfile prof;
    try {
      prof = find_critical_valuations(mech, inst.alphas, inst.valuations, inst.budgets, agent,
                                      v_max, bisect_tol);
    } catch (const VmViolationError&) {
      r.verdict = Verdict::inconclusive;
      r.detail = "value monotonicity fails for agent " + std::to_string(agent) +
                 "; the payment identity is undefined";
      return r;
    }
    if (prof.continuous_region) {
      r.verdict = Verdict::inconclusive;
      r.detail = "agent " + std::to_string(agent) +
                 " has a continuously varying allocation; no finite breakpoint profile";
      return r;
    }

    for (double v : grid) {
      bool near_critical = false;
      for (double c : prof.criticals)
        if (std::abs(v - c) <= 10.0 * bisect_tol) near_critical = true;
      if (near_critical) continue;  // either side of the step is admissible here

      double expected = prof.base_payment;
      for (std::size_t s = 0; s < prof.criticals.size(); ++s) {
        if (prof.criticals[s] > v) break;
        expected += (prof.levels[s + 1] - prof.levels[s]) * prof.criticals[s];
      }
      auto reports = inst.valuations;
      reports[static_cast<std::size_t>(agent)] = v;
      const double actual = mech(reports, inst.budgets).payments[static_cast<std::size_t>(agent)];
      if (std::abs(expected - actual) > tol) {
        r.verdict = Verdict::violated;
        r.detail = "payment deviates from the identity for agent " + std::to_string(agent);
        r.witness = PaymentWitness{agent, v, expected, actual};
        return r;
      }
    }
  }
  r.verdict = Verdict::holds;
  return r;
}

struct WmonReportPair {
  int agent = -1;
  std::vector<double> valuations;        // theta_i
  std::vector<double> valuations_prime;  // theta'_i
};

/// Weak monotonicity across the supplied report pairs (budgets fixed):
/// v'(x') - v'(x) >= v(x') - v(x) for the agent's own allocations x, x'.
inline PropertyReport check_wmon(const MultiDimAllocationFn& mech, const MultiDimInstance& inst,
                                 const std::vector<WmonReportPair>& pairs, double tol = kPropertyTol) {
  PropertyReport r;
  r.property = "wmon";
  r.params["tol"] = tol;
  r.params["pairs"] = static_cast<double>(pairs.size());

  for (const auto& pr : pairs) {
    auto with_row = [&](const std::vector<double>& row) {
      MultiDimInstance reported = inst;
      reported.valuations[static_cast<std::size_t>(pr.agent)] = row;
      return mech(reported);
    };
    const Allocation x = with_row(pr.valuations);
    const Allocation xp = with_row(pr.valuations_prime);
    const auto& row = x.x[static_cast<std::size_t>(pr.agent)];
    const auto& row_p = xp.x[static_cast<std::size_t>(pr.agent)];
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      lhs += pr.valuations_prime[j] * (row_p[j] - row[j]);
      rhs += pr.valuations[j] * (row_p[j] - row[j]);
    }
    if (lhs < rhs - tol) {
      r.verdict = Verdict::violated;
      r.detail = "weak monotonicity violated for agent " + std::to_string(pr.agent);
      r.witness = WmonWitness{pr.agent, pr.valuations, pr.valuations_prime, row, row_p, lhs, rhs};
      return r;
    }
  }
  r.verdict = Verdict::holds;
  return r;
}

/// Brute-force incentive compatibility on a misreport grid: no agent may gain
/// more than `tol` utility from any grid report (and any budget report, when a
/// budget grid is supplied). Utilities are always evaluated at the true type.
inline PropertyReport check_ic_bruteforce(const SingleDimMechanismFn& mech,
                                          const SingleDimInstance& inst,
                                          const std::vector<double>& value_grid,
                                          const std::vector<double>& budget_grid = {},
                                          double tol = kPropertyTol) {
  PropertyReport r;
  r.property = "ic";
  r.params["tol"] = tol;
  r.params["grid"] = static_cast<double>(value_grid.size());
  if (!budget_grid.empty()) r.params["budget_grid"] = static_cast<double>(budget_grid.size());

  const Outcome truthful = mech(inst.valuations, inst.budgets);

  for (int agent = 0; agent < inst.agents(); ++agent) {
    const double u_truth = utility(inst, truthful, agent);

    std::vector<double> budgets_to_try{inst.budgets[static_cast<std::size_t>(agent)]};
    for (double b : budget_grid)
      if (b != inst.budgets[static_cast<std::size_t>(agent)]) budgets_to_try.push_back(b);

    std::vector<double> values_to_try = value_grid;
    if (!budget_grid.empty()) values_to_try.push_back(inst.valuations[static_cast<std::size_t>(agent)]);

    for (double b_rep : budgets_to_try) {
      for (double v_rep : values_to_try) {
        if (v_rep == inst.valuations[static_cast<std::size_t>(agent)] &&
            b_rep == inst.budgets[static_cast<std::size_t>(agent)])
          continue;
        auto reports = inst.valuations;
        reports[static_cast<std::size_t>(agent)] = v_rep;
        auto budgets = inst.budgets;
        budgets[static_cast<std::size_t>(agent)] = b_rep;
        const Outcome o = mech(reports, budgets);
        const double u = utility(inst, o, agent);
        if (u > u_truth + tol) {
          MisreportWitness w;
          w.agent = agent;
          w.true_valuation = inst.valuations[static_cast<std::size_t>(agent)];
          w.reported_valuation = v_rep;
          if (b_rep != inst.budgets[static_cast<std::size_t>(agent)]) w.reported_budget = b_rep;
          w.truthful_utility = u_truth;
          w.misreport_utility = u;
          r.verdict = Verdict::violated;
          r.detail = "agent " + std::to_string(agent) + " gains from misreporting";
          r.witness = w;
          return r;
        }
      }
    }
  }
  r.verdict = Verdict::holds;
  return r;
}

}  // namespace clinch
