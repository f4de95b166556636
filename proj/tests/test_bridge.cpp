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

#include "clinch/bridge.hpp"
#include "helpers.hpp"

using namespace clinch;

namespace {

Outcome divisible_outcome(std::vector<std::vector<double>> x, std::vector<double> p) {
  Outcome o;
  o.allocation.x = std::move(x);
  o.allocation.divisibility = Divisibility::divisible;
  o.payments = std::move(p);
  return o;
}

}  // namespace

TEST_CASE("integral input is returned unchanged for every seed") {
  const auto base = divisible_outcome({{1, 0}, {0, 1}}, {0.5, 0.25});
  for (std::uint64_t seed : {0ULL, 1ULL, 77ULL, 123456789ULL}) {
    const auto out = randomize_outcome(base, seed);
    CHECK(out.allocation.x == base.allocation.x);
    CHECK(out.payments == base.payments);
    CHECK(out.allocation.divisibility == Divisibility::indivisible);
  }
}

TEST_CASE("identical seeds give bit-identical samples") {
  const auto base = divisible_outcome({{0.3, 0.6}, {0.45, 0.2}}, {1.0, 2.0});
  const auto a = randomize_outcome(base, 42);
  const auto b = randomize_outcome(base, 42);
  CHECK(a.allocation.x == b.allocation.x);
  CHECK(a.payments == b.payments);
  const auto c = randomize_outcome(base, 43);
  bool identical = a.allocation.x == c.allocation.x;
  // Different seeds will eventually differ on some draw; not asserted per-seed.
  (void)identical;
}

TEST_CASE("lottery marginals match the fractional allocation at three sigma") {
  const int samples = 100000;
  SECTION("split column") {
    const auto base = divisible_outcome({{0.5}, {0.5}}, {0, 0});
    int wins0 = 0;
    for (int k = 0; k < samples; ++k)
      wins0 += randomize_outcome(base, rng::substream(9001, k)).allocation.x[0][0] == 1.0;
    const double sigma = std::sqrt(0.25 / samples);
    CHECK(std::abs(wins0 / double(samples) - 0.5) <= 3 * sigma);
  }
  SECTION("partially assigned column leaves the item unassigned") {
    const auto base = divisible_outcome({{0.3}, {0.2}}, {0, 0});
    int none = 0;
    for (int k = 0; k < samples; ++k) {
      const auto o = randomize_outcome(base, rng::substream(17, k));
      if (o.allocation.x[0][0] == 0.0 && o.allocation.x[1][0] == 0.0) ++none;
    }
    const double sigma = std::sqrt(0.25 / samples);
    CHECK(std::abs(none / double(samples) - 0.5) <= 3 * sigma);
  }
}

TEST_CASE("column sums above one are rejected") {
  const auto bad = divisible_outcome({{0.7}, {0.6}}, {0, 0});
  CHECK_THROWS_AS(randomize_outcome(bad, 1), std::invalid_argument);
}

TEST_CASE("expected_outcome") {
  SECTION("constant sampler returns the input with zero standard error") {
    const auto base = divisible_outcome({{0.25, 0.75}, {0.5, 0.25}}, {1.5, 0.5});
    const auto est = expected_outcome([&](std::uint64_t) { return base; }, 64, 3);
    CHECK(est.mean.allocation.x == base.allocation.x);
    CHECK(est.mean.payments == base.payments);
    for (const auto& row : est.allocation_se)
      for (double se : row) CHECK(se == 0.0);
    for (double se : est.payment_se) CHECK(se == 0.0);
  }
  SECTION("lottery estimate converges to the fractional allocation") {
    const auto base = divisible_outcome({{0.35, 0.1}, {0.25, 0.8}}, {1.0, 2.0});
    const auto est = expected_outcome(
        [&](std::uint64_t seed) { return randomize_outcome(base, seed); }, 40000, 12);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const double se = std::max(est.allocation_se[i][j], 1e-12);
        REQUIRE(std::abs(est.mean.allocation.x[i][j] - base.allocation.x[i][j]) <= 3 * se);
      }
    CHECK(est.mean.payments == base.payments);  // payments constant across samples
  }
}

TEST_CASE("sampled utilities match the divisible utilities in expectation") {
  // Utility identity of the bridge, checked on a multi-dimensional instance.
  const MultiDimInstance inst{{{4.0, 1.0}, {2.0, 3.0}}, {10.0, 10.0}};
  const auto base = divisible_outcome({{0.6, 0.2}, {0.4, 0.7}}, {1.2, 0.8});
  const int samples = 50000;
  for (int agent = 0; agent < 2; ++agent) {
    double mean = 0.0, m2 = 0.0;
    for (int k = 0; k < samples; ++k) {
      const auto o = randomize_outcome(base, rng::substream(31337, k));
      const double u = utility(inst, o, agent);
      const double d = u - mean;
      mean += d / (k + 1);
      m2 += d * (u - mean);
    }
    const double se = std::sqrt(m2 / (double(samples) - 1) / samples);
    const double target = utility(inst, base, agent);
    REQUIRE(std::abs(mean - target) <= 3 * std::max(se, 1e-12));
  }
}

TEST_CASE("randomize_single_winner specializations") {
  const auto base = divisible_outcome({{1.0}, {0.0}}, {2.0, 0.0});
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL})
    CHECK(randomize_single_winner(base, seed).allocation.x[0][0] == 1.0);
  const auto multi = divisible_outcome({{0.5, 0.5}, {0.5, 0.5}}, {0, 0});
  CHECK_THROWS_AS(randomize_single_winner(multi, 1), std::invalid_argument);
}
