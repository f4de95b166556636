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
// Heterogeneous-item mechanisms via reduction to a single item. Because item
// values factor as alpha_j * v_i, an instance with m items is equivalent to a
// single-item instance with valuations (sum_j alpha_j) * v_i; single-item
// outcomes lift back by replicating fractions across items (divisible) or
// handing the lottery winner every item (indivisible). Utilities are preserved
// exactly by the round trip.

#include <cmath>
#include <cstdint>
#include <vector>

#include "clinch/bridge.hpp"
#include "clinch/clinching.hpp"
#include "clinch/core.hpp"

namespace clinch {

/// Collapses the items: v~_i = (sum_j alpha_j) * v_i, budgets unchanged.
inline SingleItemInstance reduce(const SingleDimInstance& inst) {
  SingleItemInstance reduced;
  reduced.budgets = inst.budgets;
  const double total = total_quality(inst.alphas);
  reduced.valuations.reserve(inst.valuations.size());
  for (double v : inst.valuations) reduced.valuations.push_back(total * v);
  return reduced;
}

/// x_{i,j} = x~_i for every item j; payments pass through.
inline Outcome lift_divisible(const Outcome& single_item, int items) {
  if (single_item.allocation.items() != 1)
    throw std::invalid_argument("lift_divisible: expected a single-item outcome");
  const int n = single_item.agents();
  Outcome out;
  out.allocation = Allocation::zeros(n, items, Divisibility::divisible);
  out.payments = single_item.payments;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < items; ++j)
      out.allocation.x[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          single_item.allocation.x[static_cast<std::size_t>(i)][0];
  return out;
}

/// The lottery winner (if any) receives every item; payments pass through.
inline Outcome lift_indivisible(const Outcome& single_item, int items) {
  if (single_item.allocation.items() != 1)
    throw std::invalid_argument("lift_indivisible: expected a single-item outcome");
  const int n = single_item.agents();
  for (int i = 0; i < n; ++i) {
    const double xi = single_item.allocation.x[static_cast<std::size_t>(i)][0];
    if (xi != 0.0 && xi != 1.0)
      throw std::invalid_argument("lift_indivisible: fractional single-item allocation");
  }
  Outcome out;
  out.allocation = Allocation::zeros(n, items, Divisibility::indivisible);
  out.payments = single_item.payments;
  for (int i = 0; i < n; ++i) {
    if (single_item.allocation.x[static_cast<std::size_t>(i)][0] == 1.0) {
      for (int j = 0; j < items; ++j)
        out.allocation.x[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1.0;
      break;
    }
  }
  return out;
}

/// Deterministic mechanism for divisible items and public budgets:
/// reduce, run the clinching auction, replicate across items.
inline Outcome run_hetero_divisible(const SingleDimInstance& inst) {
  return lift_divisible(clinching_auction(reduce(inst)), inst.items());
}

/// One sample of the randomized mechanism for indivisible items: the divisible
/// single-item outcome is rounded by a single-winner lottery and the winner
/// takes every item. Payments are the divisible payments, identical across
/// samples for fixed reports.
inline Outcome run_hetero_indivisible_randomized(const SingleDimInstance& inst, std::uint64_t seed) {
  const Outcome single = clinching_auction(reduce(inst));
  return lift_indivisible(randomize_single_winner(single, seed), inst.items());
}

}  // namespace clinch
