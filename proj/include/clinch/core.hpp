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

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace clinch {

/// Tolerance for feasibility checks (column sums, supply conservation).
inline constexpr double kFeasibilityTol = 1e-9;
/// Tolerance for definitional inequalities (IR, NPT, NT, VM, IC, ...).
inline constexpr double kPropertyTol = 1e-9;
/// Tolerance for payment-identity reconstruction (bisection-limited).
inline constexpr double kPaymentIdentityTol = 1e-6;

/// Utility of an agent whose payment exceeds his budget. IEEE -inf compares
/// exactly, so checkers never confuse it with a merely large loss.
inline constexpr double kMinusInfinity = -std::numeric_limits<double>::infinity();

/// Raised when an algorithm reaches a state its own invariants rule out.
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

enum class Divisibility { divisible, indivisible };

/// Fractional (or 0/1) assignment of m items to n agents.
/// Feasibility: every entry in [0,1] and every column sums to at most 1.
struct Allocation {
  std::vector<std::vector<double>> x;  // x[i][j]: fraction of item j held by agent i
  Divisibility divisibility = Divisibility::divisible;

  int agents() const { return static_cast<int>(x.size()); }
  int items() const { return x.empty() ? 0 : static_cast<int>(x.front().size()); }

  static Allocation zeros(int n, int m, Divisibility d = Divisibility::divisible) {
    Allocation a;
    a.x.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(m), 0.0));
    a.divisibility = d;
    return a;
  }

  double column_sum(int j) const {
    double s = 0.0;
    for (const auto& row : x) s += row[static_cast<std::size_t>(j)];
    return s;
  }
};

/// An allocation together with the payment charged to each agent.
/// Payments of hypothetical alternative outcomes may be negative.
struct Outcome {
  Allocation allocation;
  std::vector<double> payments;

  int agents() const { return static_cast<int>(payments.size()); }
};

/// Single divisible item: each agent has a budget b_i > 0 and a valuation
/// v_i > 0 per unit of the item. Canonical instances have pairwise distinct
/// valuations; mechanisms that accept ties document their tie handling.
struct SingleItemInstance {
  std::vector<double> budgets;
  std::vector<double> valuations;

  int agents() const { return static_cast<int>(budgets.size()); }
};

/// Sponsored-search style instance: item j has quality alpha_j, agent i values
/// a full item j at alpha_j * v_i. Qualities and valuations strictly decrease.
struct SingleDimInstance {
  std::vector<double> alphas;
  std::vector<double> valuations;
  std::vector<double> budgets;

  int agents() const { return static_cast<int>(valuations.size()); }
  int items() const { return static_cast<int>(alphas.size()); }
};

/// Unrestricted additive valuations: agent i values a full item j at v[i][j].
struct MultiDimInstance {
  std::vector<std::vector<double>> valuations;
  std::vector<double> budgets;

  int agents() const { return static_cast<int>(budgets.size()); }
  int items() const { return valuations.empty() ? 0 : static_cast<int>(valuations.front().size()); }
};

/// A single-dimensional type theta_i = (v_i, b_i).
struct AgentType {
  double valuation = 0.0;
  double budget = 0.0;
};

struct AllocationCheck {
  bool ok = true;
  std::string message;  // first violated invariant, with indices
};

/// Checks entry bounds, column sums and the indivisibility flag.
/// Violations are reported as values, never thrown.
inline AllocationCheck validate_allocation(const Allocation& a) {
  const int n = a.agents();
  const int m = a.items();
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(a.x[static_cast<std::size_t>(i)].size()) != m)
      return {false, "ragged allocation matrix at row " + std::to_string(i)};
    for (int j = 0; j < m; ++j) {
      const double v = a.x[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (!(v >= -kFeasibilityTol && v <= 1.0 + kFeasibilityTol))
        return {false, "entry out of [0,1] at agent " + std::to_string(i) + ", item " + std::to_string(j)};
      if (a.divisibility == Divisibility::indivisible &&
          std::abs(v - std::round(v)) > kFeasibilityTol)
        return {false, "fractional entry in indivisible allocation at agent " + std::to_string(i) +
                           ", item " + std::to_string(j)};
    }
  }
  for (int j = 0; j < m; ++j) {
    if (a.column_sum(j) > 1.0 + kFeasibilityTol)
      return {false, "column sum exceeds 1 at item " + std::to_string(j)};
  }
  return {};
}

/// Sum of the item qualities, accumulated left to right. `reduce` and the
/// constant-row utility path both factor through this exact value.
inline double total_quality(const std::vector<double>& alphas) {
  double s = 0.0;
  for (double a : alphas) s += a;
  return s;
}

/// Aggregate quality sum_j x_j * alpha_j of one allocation row.
inline double aggregate_quality(const std::vector<double>& row, const std::vector<double>& alphas) {
  if (row.size() != alphas.size())
    throw std::invalid_argument("aggregate_quality: row/alphas length mismatch");
  double s = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) s += row[j] * alphas[j];
  return s;
}

namespace detail {

inline void require_dims(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("dimension mismatch: ") + what);
}

inline bool constant_row(const std::vector<double>& row) {
  for (std::size_t j = 1; j < row.size(); ++j)
    if (row[j] != row.front()) return false;
  return !row.empty();
}

}  // namespace detail

/// Quasi-linear utility with a hard budget cap: value minus payment while
/// p_i <= b_i, and -infinity beyond the budget.
inline double utility(const SingleItemInstance& inst, const Outcome& out, int agent) {
  detail::require_dims(out.agents() == inst.agents() && out.allocation.agents() == inst.agents() &&
                           out.allocation.items() == 1,
                       "single-item outcome");
  const auto i = static_cast<std::size_t>(agent);
  const double p = out.payments[i];
  if (p > inst.budgets[i]) return kMinusInfinity;
  return out.allocation.x[i][0] * inst.valuations[i] - p;
}

inline double utility(const SingleDimInstance& inst, const Outcome& out, int agent) {
  detail::require_dims(out.agents() == inst.agents() && out.allocation.agents() == inst.agents() &&
                           out.allocation.items() == inst.items(),
                       "single-dim outcome");
  const auto i = static_cast<std::size_t>(agent);
  const double p = out.payments[i];
  if (p > inst.budgets[i]) return kMinusInfinity;
  const auto& row = out.allocation.x[i];
  // A constant row carries fraction row[0] of every item, so its value factors
  // through the total quality; evaluated as row0 * (total * v) this reproduces
  // the reduced single-item value bit for bit.
  double value;
  if (detail::constant_row(row)) {
    value = row[0] * (total_quality(inst.alphas) * inst.valuations[i]);
  } else {
    value = aggregate_quality(row, inst.alphas) * inst.valuations[i];
  }
  return value - p;
}

inline double utility(const MultiDimInstance& inst, const Outcome& out, int agent) {
  detail::require_dims(out.agents() == inst.agents() && out.allocation.agents() == inst.agents() &&
                           out.allocation.items() == inst.items(),
                       "multi-dim outcome");
  const auto i = static_cast<std::size_t>(agent);
  const double p = out.payments[i];
  if (p > inst.budgets[i]) return kMinusInfinity;
  double value = 0.0;
  for (std::size_t j = 0; j < inst.valuations[i].size(); ++j)
    value += out.allocation.x[i][j] * inst.valuations[i][j];
  return value - p;
}

namespace detail {

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

inline bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i - 1] > v[i])) return false;
  return true;
}

inline bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace detail

/// Full validation for canonical instances (as read from files). Mechanisms
/// evaluated on misreports relax the ordering/distinctness requirements and
/// document their tie handling instead.
inline void validate_instance(const SingleItemInstance& inst) {
  detail::require(inst.budgets.size() == inst.valuations.size(), "budgets/valuations length mismatch");
  detail::require(inst.agents() >= 2, "need at least two agents");
  detail::require(detail::all_finite(inst.budgets) && detail::all_finite(inst.valuations),
                  "non-finite entry");
  for (double b : inst.budgets) detail::require(b > 0.0, "budgets must be strictly positive");
  for (double v : inst.valuations) detail::require(v > 0.0, "valuations must be strictly positive");
  for (std::size_t i = 0; i < inst.valuations.size(); ++i)
    for (std::size_t k = i + 1; k < inst.valuations.size(); ++k)
      detail::require(inst.valuations[i] != inst.valuations[k], "valuations must be pairwise distinct");
}

inline void validate_instance(const SingleDimInstance& inst) {
  detail::require(inst.valuations.size() == inst.budgets.size(), "budgets/valuations length mismatch");
  detail::require(inst.agents() >= 2, "need at least two agents");
  detail::require(inst.items() >= 1, "need at least one item");
  detail::require(detail::all_finite(inst.alphas) && detail::all_finite(inst.valuations) &&
                      detail::all_finite(inst.budgets),
                  "non-finite entry");
  for (double a : inst.alphas) detail::require(a > 0.0, "qualities must be strictly positive");
  detail::require(detail::strictly_decreasing(inst.alphas), "qualities must be strictly decreasing");
  for (double v : inst.valuations) detail::require(v > 0.0, "valuations must be strictly positive");
  detail::require(detail::strictly_decreasing(inst.valuations), "valuations must be strictly decreasing");
  for (double b : inst.budgets) detail::require(b >= 0.0, "budgets must be nonnegative");
}

inline void validate_instance(const MultiDimInstance& inst) {
  detail::require(inst.valuations.size() == inst.budgets.size(), "budgets/valuations length mismatch");
  detail::require(inst.agents() >= 1, "need at least one agent");
  const int m = inst.items();
  for (const auto& row : inst.valuations) {
    detail::require(static_cast<int>(row.size()) == m, "ragged valuation matrix");
    detail::require(detail::all_finite(row), "non-finite valuation");
    for (double v : row) detail::require(v >= 0.0, "valuations must be nonnegative");
  }
  detail::require(detail::all_finite(inst.budgets), "non-finite budget");
  for (double b : inst.budgets) detail::require(b >= 0.0, "budgets must be nonnegative");
}

}  // namespace clinch
