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
// Lottery bridge between deterministic divisible outcomes and randomized
// indivisible ones: item j goes to agent i with probability x_{i,j}
// (independently across items, one RNG substream per item), payments are kept,
// so the indivisible outcome equals the divisible one in expectation.

#include <cmath>
#include <functional>
#include <vector>

#include "clinch/core.hpp"
#include "clinch/rng.hpp"

namespace clinch {

/// One lottery draw. Deterministic given the seed; item j consumes exactly one
/// uniform from rng::Stream(seed, j), so draws are schedule independent.
inline Outcome randomize_outcome(const Outcome& divisible, std::uint64_t seed) {
  const int n = divisible.agents();
  const int m = divisible.allocation.items();
  if (divisible.allocation.agents() != n)
    throw std::invalid_argument("randomize_outcome: allocation/payment size mismatch");
  for (int j = 0; j < m; ++j) {
    if (divisible.allocation.column_sum(j) > 1.0 + kFeasibilityTol)
      throw std::invalid_argument("randomize_outcome: column sum exceeds 1 at item " + std::to_string(j));
    for (int i = 0; i < n; ++i)
      if (divisible.allocation.x[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] < -kFeasibilityTol)
        throw std::invalid_argument("randomize_outcome: negative allocation entry");
  }

  Outcome out;
  out.allocation = Allocation::zeros(n, m, Divisibility::indivisible);
  out.payments = divisible.payments;
  for (int j = 0; j < m; ++j) {
    rng::Stream stream(seed, static_cast<std::uint64_t>(j));
    const double u = stream.next_uniform();
    double cum = 0.0;
    for (int i = 0; i < n; ++i) {
      cum += std::max(0.0, divisible.allocation.x[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
      if (u < cum) {
        out.allocation.x[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1.0;
        break;
      }
    }
    // u >= total column mass: the item stays unassigned.
  }
  return out;
}

/// Single-item specialization: one categorical draw over the column.
inline Outcome randomize_single_winner(const Outcome& single_item_divisible, std::uint64_t seed) {
  if (single_item_divisible.allocation.items() != 1)
    throw std::invalid_argument("randomize_single_winner: expected a single-item outcome");
  return randomize_outcome(single_item_divisible, seed);
}

/// Monte Carlo estimate of a sampler's mean outcome, with standard errors.
struct MonteCarloEstimate {
  Outcome mean;
  std::vector<std::vector<double>> allocation_se;
  std::vector<double> payment_se;
  int samples = 0;
};

/// Averages `num_samples` draws of `sampler`, which is invoked with the
/// derived seeds rng::substream(seed, k) for k = 0..num_samples-1. Standard
/// errors are sqrt(sample variance / num_samples), zero for constant cells.
inline MonteCarloEstimate expected_outcome(const std::function<Outcome(std::uint64_t)>& sampler,
                                           int num_samples, std::uint64_t seed) {
  if (num_samples < 1) throw std::invalid_argument("expected_outcome: need at least one sample");

  MonteCarloEstimate est;
  est.samples = num_samples;

  Outcome first = sampler(rng::substream(seed, 0));
  const int n = first.agents();
  const int m = first.allocation.items();

  auto mean_x = Allocation::zeros(n, m, Divisibility::divisible);
  std::vector<std::vector<double>> m2_x(static_cast<std::size_t>(n),
                                        std::vector<double>(static_cast<std::size_t>(m), 0.0));
  std::vector<double> mean_p(static_cast<std::size_t>(n), 0.0);
  std::vector<double> m2_p(static_cast<std::size_t>(n), 0.0);

  // Welford accumulation over samples.
  const auto accumulate = [&](const Outcome& o, int count) {
    for (int i = 0; i < n; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      for (int j = 0; j < m; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        const double d = o.allocation.x[ii][jj] - mean_x.x[ii][jj];
        mean_x.x[ii][jj] += d / count;
        m2_x[ii][jj] += d * (o.allocation.x[ii][jj] - mean_x.x[ii][jj]);
      }
      const double dp = o.payments[ii] - mean_p[ii];
      mean_p[ii] += dp / count;
      m2_p[ii] += dp * (o.payments[ii] - mean_p[ii]);
    }
  };

  accumulate(first, 1);
  for (int k = 1; k < num_samples; ++k)
    accumulate(sampler(rng::substream(seed, static_cast<std::uint64_t>(k))), k + 1);

  est.mean.allocation = mean_x;
  est.mean.payments = mean_p;
  est.allocation_se.assign(static_cast<std::size_t>(n),
                           std::vector<double>(static_cast<std::size_t>(m), 0.0));
  est.payment_se.assign(static_cast<std::size_t>(n), 0.0);
  if (num_samples > 1) {
    const double denom = static_cast<double>(num_samples - 1) * num_samples;
    for (int i = 0; i < n; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      for (int j = 0; j < m; ++j)
        est.allocation_se[ii][static_cast<std::size_t>(j)] =
            std::sqrt(std::max(0.0, m2_x[ii][static_cast<std::size_t>(j)]) / denom);
      est.payment_se[ii] = std::sqrt(std::max(0.0, m2_p[ii]) / denom);
    }
  }
  return est;
}

}  // namespace clinch
