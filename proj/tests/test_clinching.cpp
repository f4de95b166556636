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

#include <catch2/catch_amalgamated.hpp>

#include "clinch/checkers.hpp"
#include "clinch/clinching.hpp"
#include "helpers.hpp"

using namespace clinch;

namespace {

AuctionState make_state(std::vector<double> budgets, std::vector<int> active,
                        std::vector<int> exiting, std::vector<int> clinch_members, double price,
                        double supply) {
  AuctionState st;
  const int n = static_cast<int>(budgets.size());
  st.initial_budgets = budgets;
  st.budgets = std::move(budgets);
  st.allocated.assign(n, 0.0);
  st.phase.assign(n, AgentPhase::out);
  st.clinching.assign(n, 0);
  for (int i : active) st.phase[i] = AgentPhase::active;
  for (int i : exiting) st.phase[i] = AgentPhase::exiting;
  for (int i : clinch_members) st.clinching[i] = 1;
  st.price = price;
  st.supply = supply;
  st.recompute_demand();
  return st;
}

}  // namespace

TEST_CASE("clinching auction worked examples") {
  SECTION("one bidder outspends the other: pays the integrated clinch prices") {
    const auto out = clinching_auction(SingleItemInstance{{100.0, 3.0}, {10.0, 5.0}});
    CHECK(out.allocation.x[0][0] == Catch::Approx(1.0).margin(1e-9));
    CHECK(out.allocation.x[1][0] == Catch::Approx(0.0).margin(1e-9));
    CHECK(out.payments[0] == Catch::Approx(3.0 + 3.0 * std::log(5.0 / 3.0)).margin(1e-9));
    CHECK(out.payments[1] == Catch::Approx(0.0).margin(1e-9));
  }
  SECTION("tied budgets clinch together") {
    const auto out = clinching_auction(SingleItemInstance{{0.5, 0.5}, {3.0, 2.0}});
    CHECK(out.allocation.x[0][0] == Catch::Approx(17.0 / 32).margin(1e-12));
    CHECK(out.allocation.x[1][0] == Catch::Approx(15.0 / 32).margin(1e-12));
    CHECK(out.payments[0] == Catch::Approx(0.5).margin(1e-12));
    CHECK(out.payments[1] == Catch::Approx(0.375).margin(1e-12));
  }
  SECTION("single then double clinch segments") {
    const auto out = clinching_auction(SingleItemInstance{{0.4, 0.3}, {10.0, 5.0}});
    // Exact process values: x1 = 1 - exp(-1/3)/2 + 0.0018 e^{1/3}, etc.
    CHECK(out.allocation.x[0][0] == Catch::Approx(0.6442464470782603).margin(1e-9));
    CHECK(out.allocation.x[1][0] == Catch::Approx(0.3557535529217397).margin(1e-9));
    CHECK(out.payments[0] == Catch::Approx(0.4).margin(1e-9));
    CHECK(out.payments[1] == Catch::Approx(0.2748789763484504).margin(1e-9));
  }
  SECTION("rich bidders reduce to a second-price auction") {
    const auto out = clinching_auction(SingleItemInstance{{5.0, 4.0, 3.0}, {3.0, 2.0, 1.0}});
    CHECK(out.allocation.x[0][0] == Catch::Approx(1.0).margin(1e-9));
    CHECK(out.payments[0] == Catch::Approx(2.0).margin(1e-9));
    CHECK(out.payments[1] == 0.0);
    CHECK(out.payments[2] == 0.0);
  }
}

TEST_CASE("continuous_clinching step examples") {
  const std::vector<double> v{10.0, 5.0};

  SECTION("empty clinch set: price advances to the first clincher") {
    auto st = make_state({100.0, 3.0}, {0, 1}, {}, {}, 0.0, 1.0);
    continuous_clinching(st, v);
    CHECK(st.price == Catch::Approx(3.0));
    CHECK(st.demand == Catch::Approx(103.0 / 3.0));
    CHECK(st.clinch_set() == std::vector<int>{0});
    CHECK(st.exiting_set().empty());
  }
  SECTION("single clincher runs to the exit price") {
    auto st = make_state({100.0, 3.0}, {0, 1}, {}, {0}, 3.0, 1.0);
    continuous_clinching(st, v);
    CHECK(st.price == Catch::Approx(5.0));
    CHECK(st.supply == Catch::Approx(3.0 / 5.0));
    CHECK(st.budgets[0] == Catch::Approx(100.0 - 3.0 * std::log(5.0 / 3.0)).margin(1e-12));
    CHECK(st.allocated[0] == Catch::Approx(2.0 / 5.0).margin(1e-12));
    CHECK(st.exiting_set() == std::vector<int>{1});
    CHECK(st.active_set() == std::vector<int>{0});
  }
  SECTION("two tied clinchers deplete jointly") {
    const std::vector<double> v2{3.0, 2.0};
    auto st = make_state({0.5, 0.5}, {0, 1}, {}, {0, 1}, 0.5, 1.0);
    continuous_clinching(st, v2);
    CHECK(st.price == Catch::Approx(2.0));
    CHECK(st.supply == Catch::Approx(1.0 / 16).margin(1e-15));
    CHECK(st.budgets[0] == Catch::Approx(0.125).margin(1e-15));
    CHECK(st.budgets[1] == Catch::Approx(0.125).margin(1e-15));
    CHECK(st.allocated[0] == Catch::Approx(15.0 / 32).margin(1e-15));
    CHECK(st.allocated[1] == Catch::Approx(15.0 / 32).margin(1e-15));
    CHECK(st.exiting_set() == std::vector<int>{1});
  }
  SECTION("break point with bidders outside the clinch set") {
    // p* would be 9 (third budget joins), but the exit at 7 comes first.
    const std::vector<double> v3{10.0, 9.0, 7.0};
    auto st = make_state({4.0, 4.0, 2.0}, {0, 1, 2}, {}, {0, 1}, 6.0, 1.0);
    const auto bp = compute_break_point(st, v3);
    CHECK(bp.next_price == Catch::Approx(7.0));
    CHECK(bp.trigger == BreakPoint::Trigger::valuation_exit);
    CHECK(bp.next_supply == Catch::Approx(36.0 / 49).margin(1e-12));
    CHECK(bp.next_clincher_budget == Catch::Approx(22.0 / 7).margin(1e-12));
    continuous_clinching(st, v3);
    CHECK(st.allocated[0] == Catch::Approx(13.0 / 98).margin(1e-12));
    CHECK(st.exiting_set() == std::vector<int>{2});
    CHECK(st.clinch_set() == std::vector<int>{0, 1});
  }
  SECTION("budget crossing brings a new clincher in") {
    auto st = make_state({0.4, 0.3}, {0, 1}, {}, {0}, 0.3, 1.0);
    const auto bp = compute_break_point(st, v);
    CHECK(bp.trigger == BreakPoint::Trigger::new_clincher);
    CHECK(bp.next_price == Catch::Approx(0.3 * std::exp(1.0 / 3.0)).margin(1e-12));
    continuous_clinching(st, v);
    CHECK(st.clinch_set() == std::vector<int>{0, 1});
    CHECK(st.budgets[1] == 0.3);
  }
}

TEST_CASE("handle_exiting step examples") {
  SECTION("single clincher absorbs the exiting demand") {
    auto st = make_state({100.0 - 3.0 * std::log(5.0 / 3.0), 3.0}, {0}, {1}, {0}, 5.0, 3.0 / 5.0);
    const double b0 = st.budgets[0];
    handle_exiting(st);
    CHECK(st.allocated[0] == Catch::Approx(3.0 / 5.0).margin(1e-12));
    CHECK(st.budgets[0] == Catch::Approx(b0 - 3.0).margin(1e-12));
    CHECK(st.supply == Catch::Approx(0.0).margin(1e-12));
    CHECK(st.clinch_set() == std::vector<int>{0});
    CHECK(st.exiting_set().empty());
  }
  SECTION("no gap opens: exit batch is just cleared") {
    auto st = make_state({5.0, 4.0, 1.0}, {0, 1}, {2}, {}, 1.0, 1.0);
    handle_exiting(st);
    CHECK(st.allocated == std::vector<double>{0.0, 0.0, 0.0});
    CHECK(st.exiting_set().empty());
    CHECK(st.clinch_set().empty());
  }
  SECTION("lone remaining bidder takes the whole supply") {
    auto st = make_state({10.0, 2.0}, {0}, {1}, {}, 2.0, 1.0);
    handle_exiting(st);
    CHECK(st.allocated[0] == Catch::Approx(1.0).margin(1e-12));
    CHECK(st.budgets[0] == Catch::Approx(8.0).margin(1e-12));
    CHECK(st.supply == Catch::Approx(0.0).margin(1e-12));
    CHECK(st.clinch_set() == std::vector<int>{0});
  }
}

TEST_CASE("final_sale step examples") {
  SECTION("active bidder clears exactly") {
    auto st = make_state({2.0, 0.0}, {0}, {}, {0}, 5.0, 2.0 / 5.0);
    const auto out = final_sale(st);
    CHECK(out.allocation.x[0][0] == Catch::Approx(2.0 / 5.0).margin(1e-12));
    CHECK(out.payments[0] == Catch::Approx(2.0).margin(1e-12));
  }
  SECTION("nothing left, nothing happens") {
    auto st = make_state({0.0, 3.0}, {}, {1}, {}, 5.0, 0.0);
    const auto out = final_sale(st);
    CHECK(out.allocation.x[1][0] == 0.0);
    CHECK(out.payments[1] == 0.0);
  }
  SECTION("leftovers go to the final exit batch") {
    auto st = make_state({1.0, 4.0}, {0}, {1}, {}, 2.0, 1.0);
    const auto out = final_sale(st);
    CHECK(out.allocation.x[0][0] == Catch::Approx(0.5).margin(1e-12));  // full demand b0/p
    CHECK(out.allocation.x[1][0] == Catch::Approx(0.5).margin(1e-12));  // min(b1/p, leftovers)
    CHECK(out.payments[0] == Catch::Approx(1.0).margin(1e-12));
    CHECK(out.payments[1] == Catch::Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("run invariants on random instances") {
  rng::Stream s(2026);
  for (int t = 0; t < 60; ++t) {
    const auto inst = testutil::random_single_item(s);
    const int n = inst.agents();
    double last_price = 0.0;
    double last_supply = 1.0;
    const auto out = clinching_auction(inst, [&](const AuctionState& st) {
      double mass = st.supply;
      for (double xi : st.allocated) mass += xi;
      REQUIRE(mass == Catch::Approx(1.0).margin(1e-9));
      REQUIRE(st.price >= last_price - 1e-12);
      REQUIRE(st.supply <= last_supply + 1e-12);
      if (st.price > 0.0 && std::isfinite(st.demand)) {
        REQUIRE(st.demand == Catch::Approx(st.active_budget_sum() / st.price).margin(1e-9));
      }
      for (int i = 0; i < n; ++i) {
        REQUIRE(st.budgets[i] >= -1e-9);
        REQUIRE(st.allocated[i] >= 0.0);
      }
      last_price = st.price;
      last_supply = st.supply;
    });

    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      total += out.allocation.x[i][0];
      REQUIRE(out.payments[i] >= -1e-9);
      REQUIRE(out.payments[i] <= inst.budgets[i] + 1e-9);
      REQUIRE(utility(as_single_dim(inst), out, i) >= -1e-9);
    }
    REQUIRE(total == Catch::Approx(1.0).margin(1e-9));

    // Structural Pareto optimality: a winner means every richer-valued agent
    // spent the whole budget.
    for (int w = 0; w < n; ++w) {
      if (!(out.allocation.x[w][0] > 0.0)) continue;
      for (int r = 0; r < n; ++r)
        if (inst.valuations[r] > inst.valuations[w])
          REQUIRE(inst.budgets[r] - out.payments[r] <= 1e-9);
    }
  }
}

TEST_CASE("tie handling is deterministic and keeps the outcome rational") {
  SECTION("all valuations equal") {
    const SingleItemInstance tied{{2.0, 1.0, 1.5}, {4.0, 4.0, 4.0}};
    const auto a = clinching_auction(tied);
    const auto b = clinching_auction(tied);
    double total = 0.0;
    for (int i = 0; i < 3; ++i) {
      CHECK(a.allocation.x[i][0] == b.allocation.x[i][0]);
      CHECK(a.payments[i] == b.payments[i]);
      CHECK(utility(as_single_dim(tied), a, i) >= -1e-9);
      CHECK(a.payments[i] >= -1e-9);
      total += a.allocation.x[i][0];
    }
    CHECK(total == Catch::Approx(1.0).margin(1e-9));
  }
  SECTION("a report tying another agent's valuation stays well-behaved") {
    // Misreport grids can land exactly on a rival's valuation.
    const SingleItemInstance tied{{5.0, 3.0, 2.0}, {4.0, 4.0, 1.5}};
    const auto out = clinching_auction(tied);
    double total = 0.0;
    for (int i = 0; i < 3; ++i) {
      CHECK(utility(as_single_dim(tied), out, i) >= -1e-9);
      CHECK(out.payments[i] >= -1e-9);
      CHECK(out.payments[i] <= tied.budgets[i] + 1e-9);
      total += out.allocation.x[i][0];
    }
    CHECK(total == Catch::Approx(1.0).margin(1e-9));
    const auto again = clinching_auction(tied);
    CHECK(out.allocation.x == again.allocation.x);
    CHECK(out.payments == again.payments);
  }
  SECTION("tied budgets share the clinch set") {
    const SingleItemInstance tied{{3.0, 3.0, 0.5}, {9.0, 7.0, 5.0}};
    const auto out = clinching_auction(tied);
    double total = 0.0;
    for (int i = 0; i < 3; ++i) total += out.allocation.x[i][0];
    CHECK(total == Catch::Approx(1.0).margin(1e-9));
    CHECK(out.allocation.x[0][0] > 0.0);
    CHECK(out.allocation.x[1][0] > 0.0);
  }
  SECTION("exhausting purchases never round the payment past the budget") {
    // Regression: the gap purchase b - (b/p)*p can round one ulp negative,
    // which would push the payment past the initial budget and the utility
    // to minus infinity.
    const SingleItemInstance inst{
        {6.3085346019337907, 5.5597158925148502, 6.0792365648095492, 9.8135121436625141},
        {9.2516561334799157, 9.2516561334799157, 1.8310697815970318, 1.7357219961536838}};
    const auto out = clinching_auction(inst);
    for (int i = 0; i < 4; ++i) {
      CHECK(out.payments[i] <= inst.budgets[i]);
      CHECK(std::isfinite(utility(as_single_dim(inst), out, i)));
      CHECK(utility(as_single_dim(inst), out, i) >= -1e-9);
    }
  }
}

TEST_CASE("degenerate agents are removed up front") {
  const auto out = clinching_auction(SingleItemInstance{{2.0, 0.0, 3.0}, {5.0, 4.0, 0.0}});
  CHECK(out.allocation.x[1][0] == 0.0);
  CHECK(out.payments[1] == 0.0);
  CHECK(out.allocation.x[2][0] == 0.0);
  CHECK(out.payments[2] == 0.0);
  CHECK(out.allocation.x[0][0] == 1.0);  // lone real bidder takes all for free
  CHECK(out.payments[0] == 0.0);
}

TEST_CASE("input errors") {
  CHECK_THROWS_AS(clinching_auction(SingleItemInstance{{1.0}, {1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(clinching_auction(SingleItemInstance{{1.0, -2.0}, {1.0, 2.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(clinching_auction(SingleItemInstance{{1.0, 2.0}, {1.0}}), std::invalid_argument);
}
