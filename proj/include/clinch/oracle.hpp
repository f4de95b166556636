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

#include <algorithm>
#include <cmath>
#include <vector>

#include "clinch/core.hpp"

namespace clinch {

/// Brute-force discretization of the ascending price process, kept independent
/// of the closed-form auction so the two can cross-check each other.
///
/// The clock rises multiplicatively, p <- p(1+eps). At each tick: bidders
/// whose valuation the price has reached are removed (they keep what they
/// clinched earlier); every remaining bidder simultaneously clinches
/// max(0, S - sum of the other bidders' demand) at the current price, the
/// simultaneous gaps being exactly the amounts that restore every residual
/// demand to the supply. Ticks start just below the first possible event
/// (no exit can occur below the lowest valuation and no gap can open below
/// (sum b - max b)/S) and stop when demand no longer exceeds supply, at which
/// point the market clears: remaining bidders buy their full demand and the
/// bidders removed at the final price buy the leftovers in decreasing-budget
/// order.
inline Outcome epsilon_oracle(const SingleItemInstance& inst, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const int n = inst.agents();
  if (static_cast<int>(inst.valuations.size()) != n)
    throw std::invalid_argument("budgets/valuations length mismatch");

  Outcome out;
  out.allocation = Allocation::zeros(n, 1, Divisibility::divisible);
  out.payments.assign(static_cast<std::size_t>(n), 0.0);

  std::vector<int> alive;
  for (int i = 0; i < n; ++i)
    if (inst.budgets[static_cast<std::size_t>(i)] > 0.0 &&
        inst.valuations[static_cast<std::size_t>(i)] > 0.0)
      alive.push_back(i);
  if (alive.empty()) return out;
  if (alive.size() == 1) {
    out.allocation.x[static_cast<std::size_t>(alive.front())][0] = 1.0;
    return out;
  }

  std::vector<double> b = inst.budgets;
  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  double supply = 1.0;

  double sum_b = 0.0, max_b = 0.0, min_v = std::numeric_limits<double>::infinity(),
         max_v = 0.0;
  for (int i : alive) {
    sum_b += b[static_cast<std::size_t>(i)];
    max_b = std::max(max_b, b[static_cast<std::size_t>(i)]);
    min_v = std::min(min_v, inst.valuations[static_cast<std::size_t>(i)]);
    max_v = std::max(max_v, inst.valuations[static_cast<std::size_t>(i)]);
  }
  double p = (1.0 - 10.0 * eps) * std::min(sum_b - max_b, min_v);

  const auto finish = [&]() {
    for (int i = 0; i < n; ++i) {
      out.allocation.x[static_cast<std::size_t>(i)][0] = x[static_cast<std::size_t>(i)];
      out.payments[static_cast<std::size_t>(i)] =
          inst.budgets[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)];
    }
    return out;
  };

  const long long max_steps =
      static_cast<long long>(std::log(max_v * (1.0 + eps) / p) / std::log1p(eps)) + 1000;
  std::vector<double> gap(static_cast<std::size_t>(n), 0.0);

  for (long long step = 0; step <= max_steps; ++step) {
    // Remove bidders the price has reached; they form this tick's exit batch.
    std::vector<int> batch;
    for (std::size_t k = 0; k < alive.size();) {
      const int i = alive[k];
      if (inst.valuations[static_cast<std::size_t>(i)] <= p) {
        batch.push_back(i);
        alive[k] = alive.back();
        alive.pop_back();
      } else {
        ++k;
      }
    }

    double demand = 0.0;
    for (int i : alive) demand += b[static_cast<std::size_t>(i)] / p;

    if (demand <= supply) {
      // Clear: survivors take their full demand, then this tick's exit batch
      // takes the leftovers at the frozen price.
      supply -= demand;
      for (int i : alive) {
        x[static_cast<std::size_t>(i)] += b[static_cast<std::size_t>(i)] / p;
        b[static_cast<std::size_t>(i)] = 0.0;
      }
      std::sort(batch.begin(), batch.end(), [&](int u, int v) {
        const double bu = b[static_cast<std::size_t>(u)], bv = b[static_cast<std::size_t>(v)];
        if (bu != bv) return bu > bv;
        return u < v;
      });
      for (int i : batch) {
        if (supply <= 0.0) break;
        const double q = std::min(b[static_cast<std::size_t>(i)] / p, supply);
        x[static_cast<std::size_t>(i)] += q;
        b[static_cast<std::size_t>(i)] = std::max(0.0, b[static_cast<std::size_t>(i)] - q * p);
        supply -= q;
      }
      return finish();
    }

    // Simultaneous clinching from the pre-tick state.
    double total_gap = 0.0;
    for (int i : alive) {
      const double others = demand - b[static_cast<std::size_t>(i)] / p;
      gap[static_cast<std::size_t>(i)] = std::max(0.0, supply - others);
      total_gap += gap[static_cast<std::size_t>(i)];
    }
    if (total_gap > 0.0) {
      for (int i : alive) {
        const double g = gap[static_cast<std::size_t>(i)];
        if (g <= 0.0) continue;
        x[static_cast<std::size_t>(i)] += g;
        b[static_cast<std::size_t>(i)] = std::max(0.0, b[static_cast<std::size_t>(i)] - g * p);
      }
      supply -= total_gap;
    }
    if (supply <= 1e-15) return finish();

    p *= (1.0 + eps);
  }
  throw InternalError("epsilon_oracle: step guard exceeded");
}

}  // namespace clinch
