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

#include "hyperecp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "hyperecp/detection.hpp"
#include "hyperecp/format.hpp"
#include "json.hpp"

namespace hyperecp::analysis {

namespace {

double product_strength(const protocol::SourceParams& p) {
  return 4.0 * std::norm(p.alpha) * std::norm(p.beta) * std::norm(p.gamma) *
         std::norm(p.delta);
}

double recycle_probability(const protocol::SourceParams& p) {
  const double pol = std::norm(p.alpha) * std::norm(p.alpha) +
                     std::norm(p.beta) * std::norm(p.beta);
  const double spa = std::norm(p.gamma) * std::norm(p.gamma) +
                     std::norm(p.delta) * std::norm(p.delta);
  return pol * spa;
}

}  // namespace

ProbReport analytic_probs(const protocol::SourceParams& p) {
  p.validate();

  ProbReport r;
  r.p1 = product_strength(p);
  r.recycle = recycle_probability(p);
  if (r.recycle < 0.25 - 1e-12)
    throw std::runtime_error("recycle probability below its normalization floor: " +
                             fmt::g17(r.recycle));

  const double via_recycled =
      r.p1 + product_strength(protocol::recycled_params(p)) * r.recycle;
  const double via_quotient = r.p1 + r.p1 * r.p1 / (4.0 * r.recycle);
  if (std::abs(via_recycled - via_quotient) > 1e-12)
    throw std::runtime_error("two-round success forms disagree: " +
                             fmt::g17(via_recycled) + " vs " +
                             fmt::g17(via_quotient));
  r.p2 = via_quotient;
  return r;
}

ProbReport simulate_and_compare(const protocol::SourceParams& p) {
  ProbReport r = analytic_probs(p);
  const detection::RunResult run =
      detection::run_protocol(p, detection::ProtocolKind::Bell);
  r.sim_success = run.success;
  r.sim_recycle = run.recycle;
  r.sim_fail = run.fail;
  r.max_abs_deviation =
      std::max({std::abs(r.sim_success - r.p1), std::abs(r.sim_recycle - r.recycle),
                std::abs(r.sim_fail - (1.0 - r.p1 - r.recycle))});
  return r;
}

RecycledRound recycled_round_check(const protocol::SourceParams& p) {
  RecycledRound round;
  round.params = protocol::recycled_params(p);
  round.expected = product_strength(round.params);
  round.simulated =
      detection::run_protocol(round.params, detection::ProtocolKind::Bell).success;
  round.deviation = std::abs(round.simulated - round.expected);
  return round;
}

double multi_round_success(const protocol::SourceParams& p, int rounds) {
  if (rounds < 1) throw std::invalid_argument("rounds must be at least 1");
  p.validate();

  protocol::SourceParams cur = p;
  double total = product_strength(cur);
  double carried = 1.0;  // probability mass still held in residual states
  for (int k = 2; k <= rounds; ++k) {
    carried *= recycle_probability(cur);
    cur = protocol::recycled_params(cur);
    total += carried * product_strength(cur);
  }
  return total;
}

std::vector<SweepRow> sweep(const SweepSpec& spec) {
  if (!(spec.step > 0.0) || spec.step > 0.5)
    throw std::invalid_argument("sweep step must lie in (0, 0.5]");

  std::vector<double> axis;
  for (int i = 1;; ++i) {
    double v = i * spec.step;
    if (v > 0.5 + 1e-9) break;
    if (std::abs(v - 0.5) <= 1e-9) v = 0.5;
    axis.push_back(v);
    if (v == 0.5) break;
  }

  std::vector<SweepRow> rows;
  for (double a2 : axis)
    for (double g2 : axis) {
      const ProbReport r =
          simulate_and_compare(protocol::SourceParams::from_intensities(a2, g2));
      rows.push_back({a2, g2, r.p1, r.p2, r.sim_success, r.sim_recycle, r.sim_fail,
                      r.max_abs_deviation});
    }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& os) {
  os << "alpha2,gamma2,p1,p2,sim_success,sim_recycle,sim_fail,max_dev\n";
  for (const SweepRow& r : rows)
    os << fmt::g17(r.alpha2) << ',' << fmt::g17(r.gamma2) << ',' << fmt::g17(r.p1)
       << ',' << fmt::g17(r.p2) << ',' << fmt::g17(r.sim_success) << ','
       << fmt::g17(r.sim_recycle) << ',' << fmt::g17(r.sim_fail) << ','
       << fmt::g17(r.max_dev) << '\n';
}

void write_sweep_json(const std::vector<SweepRow>& rows, std::ostream& os) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const SweepRow& r : rows) {
    nlohmann::ordered_json row;
    row["alpha2"] = r.alpha2;
    row["gamma2"] = r.gamma2;
    row["p1"] = r.p1;
    row["p2"] = r.p2;
    row["sim_success"] = r.sim_success;
    row["sim_recycle"] = r.sim_recycle;
    row["sim_fail"] = r.sim_fail;
    row["max_dev"] = r.max_dev;
    doc.push_back(std::move(row));
  }
  os << doc.dump(2) << '\n';
}

}  // namespace hyperecp::analysis
