// Copyright 2026 The hyperecp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <doctest.h>

#include "hyperecp/analysis.hpp"
#include "json.hpp"

using namespace hyperecp;
using analysis::ProbReport;
using analysis::SweepRow;
using protocol::SourceParams;

TEST_SUITE("analysis") {

TEST_CASE("closed forms hit the headline values") {
  const ProbReport balanced = analysis::analytic_probs(SourceParams::from_intensities(0.5, 0.5));
  CHECK(std::abs(balanced.p1 - 0.25) <= 1e-12);
  CHECK(std::abs(balanced.recycle - 0.25) <= 1e-12);
  CHECK(std::abs(balanced.p2 - 0.3125) <= 1e-12);

  const ProbReport uneven = analysis::analytic_probs(SourceParams::from_intensities(0.3, 0.4));
  CHECK(std::abs(uneven.p1 - 0.2016) <= 1e-12);
  CHECK(std::abs(uneven.recycle - 0.3016) <= 1e-12);
  // Second-round gain written out from the recycled coefficients directly.
  const double gain =
      4.0 * (0.09 * 0.49 / (0.58 * 0.58)) * (0.16 * 0.36 / (0.52 * 0.52)) * 0.3016;
  CHECK(std::abs(uneven.p2 - (0.2016 + gain)) <= 1e-12);
  CHECK(uneven.p2 == doctest::Approx(0.235289).epsilon(1e-5));
}

TEST_CASE("two-round success never beats five sixteenths") {
  double best = 0.0;
  for (double a2 = 0.05; a2 <= 0.5001; a2 += 0.05)
    for (double g2 = 0.05; g2 <= 0.5001; g2 += 0.05) {
      const ProbReport r =
          analysis::analytic_probs(SourceParams::from_intensities(a2, g2));
      CHECK(r.recycle >= 0.25 - 1e-12);
      CHECK(r.p2 <= 0.3125 + 1e-12);
      CHECK(r.p2 >= r.p1 - 1e-15);
      best = std::max(best, r.p2);
      if (std::abs(a2 - 0.5) > 1e-9 || std::abs(g2 - 0.5) > 1e-9)
        CHECK(r.p2 < 0.3125 - 1e-12);
    }
  CHECK(std::abs(best - 0.3125) <= 1e-12);
}

TEST_CASE("repeated recycling drives the splitting away from balance") {
  SourceParams p = SourceParams::from_intensities(0.3, 0.4);
  double prev = std::norm(p.alpha);
  CHECK(std::abs(prev - 0.3) <= 1e-12);
  for (int i = 0; i < 3; ++i) {
    p = protocol::recycled_params(p);
    const double cur = std::norm(p.alpha);
    CHECK(cur < prev);
    prev = cur;
  }
  CHECK(std::abs(std::norm(protocol::recycled_params(
                     SourceParams::from_intensities(0.3, 0.4)).alpha) -
                 0.09 / 0.58) <= 1e-12);
}

TEST_CASE("multi-round success extends the two-round closed form") {
  const SourceParams p = SourceParams::from_intensities(0.3, 0.4);
  const ProbReport r = analysis::analytic_probs(p);
  CHECK(std::abs(analysis::multi_round_success(p, 1) - r.p1) <= 1e-15);
  CHECK(std::abs(analysis::multi_round_success(p, 2) - r.p2) <= 1e-15);

  // Gains shrink doubly exponentially; beyond a few rounds the increment
  // drops below one ulp of the total.
  double prev = 0.0;
  for (int rounds = 1; rounds <= 6; ++rounds) {
    const double cur = analysis::multi_round_success(p, rounds);
    CHECK(cur >= prev);
    if (rounds <= 4) CHECK(cur > prev);
    prev = cur;
  }

  // Balanced sources add 4^-k per round: 1/4, 5/16, 21/64, ... -> 1/3.
  const SourceParams bal = SourceParams::from_intensities(0.5, 0.5);
  CHECK(std::abs(analysis::multi_round_success(bal, 3) - 21.0 / 64.0) <= 1e-12);
  CHECK(std::abs(analysis::multi_round_success(bal, 40) - 1.0 / 3.0) <= 1e-12);

  CHECK_THROWS_AS(analysis::multi_round_success(p, 0), std::invalid_argument);
}

TEST_CASE("simulation tracks the closed forms") {
  const ProbReport r =
      analysis::simulate_and_compare(SourceParams::from_intensities(0.35, 0.45));
  CHECK(r.max_abs_deviation <= 1e-9);
  CHECK(std::abs(r.sim_success - r.p1) <= 1e-9);
  CHECK(std::abs(r.sim_recycle - r.recycle) <= 1e-9);
  CHECK(std::abs(r.sim_fail - (1.0 - r.p1 - r.recycle)) <= 1e-9);
}

TEST_CASE("a recycled round keeps the promised success rate") {
  const auto balanced =
      analysis::recycled_round_check(SourceParams::from_intensities(0.5, 0.5));
  CHECK(std::abs(balanced.simulated - 0.25) <= 1e-9);

  const auto uneven =
      analysis::recycled_round_check(SourceParams::from_intensities(0.3, 0.4));
  const double expected =
      4.0 * (0.09 * 0.49 / (0.58 * 0.58)) * (0.16 * 0.36 / (0.52 * 0.52));
  CHECK(std::abs(uneven.expected - expected) <= 1e-12);
  CHECK(uneven.deviation <= 1e-9);
}

TEST_CASE("sweep grid is rectangular, sorted, and accurate") {
  const auto rows = analysis::sweep({0.1});
  REQUIRE(rows.size() == 25);
  CHECK(std::abs(rows.front().alpha2 - 0.1) <= 1e-12);
  CHECK(rows.back().alpha2 == 0.5);
  CHECK(rows.back().gamma2 == 0.5);
  CHECK(std::abs(rows.back().p1 - 0.25) <= 1e-12);
  CHECK(std::abs(rows.back().p2 - 0.3125) <= 1e-12);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const bool sorted = rows[i - 1].alpha2 < rows[i].alpha2 ||
                        (rows[i - 1].alpha2 == rows[i].alpha2 &&
                         rows[i - 1].gamma2 < rows[i].gamma2);
    CHECK(sorted);
  }
  for (const SweepRow& r : rows) {
    CHECK(r.max_dev <= 1e-9);
    // First-round success grows toward balance along each axis.
    CHECK(std::abs(r.p1 - 4.0 * r.alpha2 * (1 - r.alpha2) * r.gamma2 * (1 - r.gamma2)) <=
          1e-12);
  }

  const auto coarse = analysis::sweep({0.25});
  REQUIRE(coarse.size() == 4);
  CHECK(std::abs(coarse.front().p1 -
                 4.0 * 0.25 * 0.75 * 0.25 * 0.75) <= 1e-12);

  CHECK_THROWS_AS(analysis::sweep({0.0}), std::invalid_argument);
  CHECK_THROWS_AS(analysis::sweep({-0.1}), std::invalid_argument);
  CHECK_THROWS_AS(analysis::sweep({0.75}), std::invalid_argument);
}

TEST_CASE("sweep exports are deterministic and lossless") {
  const auto rows = analysis::sweep({0.25});

  std::ostringstream csv1, csv2;
  analysis::write_sweep_csv(rows, csv1);
  analysis::write_sweep_csv(rows, csv2);
  CHECK(csv1.str() == csv2.str());
  CHECK(csv1.str().rfind("alpha2,gamma2,p1,p2,sim_success,sim_recycle,sim_fail,max_dev\n",
                         0) == 0);
  std::size_t lines = 0;
  for (char c : csv1.str())
    if (c == '\n') ++lines;
  CHECK(lines == rows.size() + 1);

  std::ostringstream js;
  analysis::write_sweep_json(rows, js);
  const auto doc = nlohmann::json::parse(js.str());
  REQUIRE(doc.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(doc[i].at("p1").get<double>() == rows[i].p1);
    CHECK(doc[i].at("p2").get<double>() == rows[i].p2);
    CHECK(doc[i].at("max_dev").get<double>() == rows[i].max_dev);
  }
}

}  // TEST_SUITE
