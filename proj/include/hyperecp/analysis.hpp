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

#pragma once

#include <iosfwd>
#include <vector>

#include "hyperecp/protocol.hpp"

namespace hyperecp::analysis {

struct ProbReport {
  double p1 = 0.0;              // first-round success, 4|abgd|^2
  double recycle = 0.0;         // (|a|^4+|b|^4)(|g|^4+|d|^4)
  double p2 = 0.0;              // success after one recycling round
  double sim_success = 0.0;
  double sim_recycle = 0.0;
  double sim_fail = 0.0;
  double max_abs_deviation = 0.0;  // simulation vs the closed forms
};

// Closed forms only; the simulated fields stay zero. Checks that the two
// algebraic expressions for p2 (recycled coefficients times the recycle
// probability, and the quotient form) agree to 1e-12, and that the recycle
// probability is at least 1/4, which normalization forces.
ProbReport analytic_probs(const protocol::SourceParams& p);

// Closed forms plus a full two-photon enumeration.
ProbReport simulate_and_compare(const protocol::SourceParams& p);

struct RecycledRound {
  protocol::SourceParams params;  // coefficients after one round
  double expected = 0.0;          // 4|a'b'g'd'|^2
  double simulated = 0.0;
  double deviation = 0.0;
};

// Runs the full pipeline on fresh sources carrying the once-recycled
// coefficients; the success aggregate must reproduce the second-round term.
RecycledRound recycled_round_check(const protocol::SourceParams& p);

// Closed-form cumulative success when the residual state is concentrated
// again and again: rounds = 1 gives p1, rounds = 2 gives p2. Balanced
// params approach 1/3 as rounds grow.
double multi_round_success(const protocol::SourceParams& p, int rounds);

struct SweepRow {
  double alpha2 = 0.0;
  double gamma2 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double sim_success = 0.0;
  double sim_recycle = 0.0;
  double sim_fail = 0.0;
  double max_dev = 0.0;
};

struct SweepSpec {
  double step = 0.05;  // grid covers {step, 2 step, ...} up to 0.5 on both axes
};

std::vector<SweepRow> sweep(const SweepSpec& spec = {});

// Header: alpha2,gamma2,p1,p2,sim_success,sim_recycle,sim_fail,max_dev
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& os);
void write_sweep_json(const std::vector<SweepRow>& rows, std::ostream& os);

}  // namespace hyperecp::analysis
