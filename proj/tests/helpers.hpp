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
#include <vector>

#include "clinch/checkers.hpp"
#include "clinch/core.hpp"
#include "clinch/rng.hpp"

namespace testutil {

/// Budgets and valuations uniform in (0, hi], valuations pairwise distinct.
inline clinch::SingleItemInstance random_single_item(clinch::rng::Stream& s, int n_min = 2,
                                                     int n_max = 6, double hi = 10.0) {
  const int n = s.next_int(n_min, n_max);
  clinch::SingleItemInstance inst;
  inst.budgets.resize(n);
  inst.valuations.resize(n);
  for (int i = 0; i < n; ++i) inst.budgets[i] = s.next_positive(0.0, hi);
  bool distinct = false;
  while (!distinct) {
    for (int i = 0; i < n; ++i) inst.valuations[i] = s.next_positive(0.0, hi);
    distinct = true;
    for (int i = 0; i < n && distinct; ++i)
      for (int k = i + 1; k < n; ++k)
        if (std::abs(inst.valuations[i] - inst.valuations[k]) < 1e-9) distinct = false;
  }
  return inst;
}

/// Valid random sponsored-search instance: strictly decreasing qualities and
/// valuations, nonnegative budgets.
inline clinch::SingleDimInstance random_single_dim(clinch::rng::Stream& s, int n_min = 2,
                                                   int n_max = 6, int m_min = 1, int m_max = 4,
                                                   double hi = 10.0) {
  const int n = s.next_int(n_min, n_max);
  const int m = s.next_int(m_min, m_max);
  clinch::SingleDimInstance inst;
  inst.alphas.resize(m);
  inst.valuations.resize(n);
  inst.budgets.resize(n);
  for (int j = 0; j < m; ++j) inst.alphas[j] = s.next_positive(0.0, 3.0);
  std::sort(inst.alphas.begin(), inst.alphas.end(), std::greater<>());
  for (int j = 1; j < m; ++j)
    if (inst.alphas[j - 1] - inst.alphas[j] < 1e-6) inst.alphas[j] = inst.alphas[j - 1] * 0.75;
  for (int i = 0; i < n; ++i) inst.valuations[i] = s.next_positive(0.0, hi);
  std::sort(inst.valuations.begin(), inst.valuations.end(), std::greater<>());
  for (int i = 1; i < n; ++i)
    if (inst.valuations[i - 1] - inst.valuations[i] < 1e-6)
      inst.valuations[i] = inst.valuations[i - 1] * 0.8;
  for (int i = 0; i < n; ++i) inst.budgets[i] = s.next_positive(0.0, hi);
  return inst;
}

/// Random divisible allocation with column sums at most 1, plus payments.
inline clinch::Outcome random_divisible_outcome(clinch::rng::Stream& s, int n, int m,
                                                double payment_hi = 2.0) {
  clinch::Outcome out;
  out.allocation = clinch::Allocation::zeros(n, m, clinch::Divisibility::divisible);
  out.payments.resize(n);
  for (int j = 0; j < m; ++j) {
    double mass = s.next_uniform();  // total assigned mass of this column
    for (int i = 0; i < n && mass > 0.0; ++i) {
      const double share = (i + 1 == n) ? mass : mass * s.next_uniform();
      out.allocation.x[i][j] = share;
      mass -= share;
    }
  }
  for (int i = 0; i < n; ++i) out.payments[i] = s.next_uniform() * payment_hi;
  return out;
}

// ---------------------------------------------------------------------------
// Stub mechanisms exercising the checkers. All are single-dimensional,
// two-item unless noted, and treat agent 0 as the probed agent; the other
// agents split the remainder and pay nothing.

/// Staircase mechanism: agent 0 wins item 2 at reports >= t1 and both items at
/// reports >= t2, paying alpha2*t1 resp. alpha2*t1 + alpha1*t2 (plus
/// `overcharge` above t1, to plant a payment-identity violation).
inline clinch::SingleDimMechanismFn step_stub(double t1, double t2, std::vector<double> alphas,
                                              double overcharge = 0.0) {
  return [=](const std::vector<double>& v, const std::vector<double>& b) {
    (void)b;
    const int n = static_cast<int>(v.size());
    clinch::Outcome out;
    out.allocation = clinch::Allocation::zeros(n, 2, clinch::Divisibility::indivisible);
    out.payments.assign(n, 0.0);
    if (v[0] >= t2) {
      out.allocation.x[0][0] = 1.0;
      out.allocation.x[0][1] = 1.0;
      out.payments[0] = alphas[1] * t1 + alphas[0] * t2 + overcharge;
    } else if (v[0] >= t1) {
      out.allocation.x[0][1] = 1.0;
      out.allocation.x[0][0] = 0.0;
      out.payments[0] = alphas[1] * t1 + overcharge;
      if (n > 1) out.allocation.x[1][0] = 1.0;
    } else if (n > 1) {
      out.allocation.x[1][0] = 1.0;
      out.allocation.x[1][1] = 1.0;
    }
    return out;
  };
}

/// Value-monotonicity violator: agent 0 holds item 1 only for reports inside
/// [t1, t2) and is demoted to nothing above t2.
inline clinch::SingleDimMechanismFn demoting_stub(double t1, double t2) {
  return [=](const std::vector<double>& v, const std::vector<double>& b) {
    (void)b;
    const int n = static_cast<int>(v.size());
    clinch::Outcome out;
    out.allocation = clinch::Allocation::zeros(n, 2, clinch::Divisibility::indivisible);
    out.payments.assign(n, 0.0);
    if (v[0] >= t1 && v[0] < t2) out.allocation.x[0][0] = 1.0;
    return out;
  };
}

/// Pay-your-bid single-item stub (understating is profitable - not IC).
inline clinch::SingleDimMechanismFn first_price_stub() {
  return [](const std::vector<double>& v, const std::vector<double>& b) {
    const int n = static_cast<int>(v.size());
    int best = 0;
    for (int i = 1; i < n; ++i)
      if (v[i] > v[best]) best = i;
    clinch::Outcome out;
    out.allocation = clinch::Allocation::zeros(n, 1, clinch::Divisibility::indivisible);
    out.payments.assign(n, 0.0);
    out.allocation.x[best][0] = 1.0;
    out.payments[best] = std::min(v[best], b[best]);
    return out;
  };
}

/// Ignores all reports: fixed allocation, zero payments.
inline clinch::SingleDimMechanismFn constant_stub(std::vector<std::vector<double>> allocation) {
  return [alloc = std::move(allocation)](const std::vector<double>& v, const std::vector<double>&) {
    clinch::Outcome out;
    out.allocation.x = alloc;
    out.allocation.divisibility = clinch::Divisibility::divisible;
    out.payments.assign(v.size(), 0.0);
    return out;
  };
}

}  // namespace testutil
