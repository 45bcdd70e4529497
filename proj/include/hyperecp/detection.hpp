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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hyperecp/protocol.hpp"

namespace hyperecp::detection {

using fock::Rail;
using fock::State;

enum class Side { Alice, Bob, Charlie };

const char* side_name(Side s);

// Maps detector names to the (path, polarization) rails they watch. The
// detectors resolve arrival time but not photon number.
class DetectorAssignment {
 public:
  void assign(std::string name, Rail rail, Side side);

  bool measures(const Rail& r) const { return by_rail_.count(r) != 0; }
  const std::string& name_of(const Rail& r) const;
  const Rail& rail_of(const std::string& name) const;
  Side side_of(const std::string& name) const;

  const std::vector<std::string>& names() const { return order_; }
  const std::set<std::string>& measured_paths() const { return paths_; }

 private:
  std::map<Rail, std::string> by_rail_;
  std::map<std::string, std::pair<Rail, Side>> by_name_;
  std::vector<std::string> order_;
  std::set<std::string> paths_;
};

// D1..D4 watch Alice's analysis paths, D5..D8 Bob's.
DetectorAssignment bell_assignment();
// Bell assignment plus Charlie's DH1/DV1 on one analysis path, DH2/DV2 on
// the other.
DetectorAssignment ghz_assignment();

struct Click {
  std::string detector;
  int tbin = 0;

  auto operator<=>(const Click&) const = default;
};

// "D3" at time 0, "D3@2" otherwise; sorted and joined with '+'.
std::string pattern_string(const std::vector<Click>& clicks);

enum class OutcomeClass { Success, Recycle, Fail };

const char* outcome_class_name(OutcomeClass c);

struct Outcome {
  std::vector<Click> ab_clicks;       // times relative to the earliest Alice/Bob click
  std::vector<Click> charlie_clicks;  // Charlie's photon never enters a delay line
  int interval = 0;                   // largest relative Alice/Bob click time
  double probability = 0.0;
  State collapsed;                    // normalized state of the unmeasured photons
  OutcomeClass cls = OutcomeClass::Fail;
  std::optional<protocol::ReferenceFamily> reference;
  protocol::FeedForward feedforward;
  double post_ff_fidelity = 0.0;      // against the ++ member of the matched class

  std::string pattern() const { return pattern_string(ab_clicks); }
  std::string charlie_pattern() const { return pattern_string(charlie_clicks); }
};

// Projects s onto every distinguishable click record. Monomials are grouped
// by their measured part after shifting Alice/Bob arrival times to a common
// zero (the detectors share no absolute time reference); amplitudes within a
// group add coherently. Every monomial must carry exactly expected_measured
// photons on assigned rails and none on an assigned path's unassigned rail.
// Probabilities include the bosonic factorial weights and must sum to 1
// within tol::probability; coherent grouping could break that sum only if
// distinct absolute timings of one relative record interfered, which the
// delay layout rules out, and the check guards exactly that assumption.
std::vector<Outcome> measure(const State& s, const DetectorAssignment& d,
                             int expected_measured);

enum class ProtocolKind { Bell, Ghz };

// Fidelity-driven classification with the click-interval law as an
// independent cross-check: Fail clicks are 1 or 3 bins apart, Success
// clicks 0 (opposite sides) or 2, Recycle records are a lone click or a
// same-side pair at interval 0. Any disagreement between the matched
// reference and the interval law throws.
class Classifier {
 public:
  Classifier(const protocol::SourceParams& p, ProtocolKind kind,
             DetectorAssignment assignment);

  // Fills cls, reference, feedforward, post_ff_fidelity.
  void classify(Outcome& o) const;

 private:
  DetectorAssignment assignment_;
  std::vector<std::pair<protocol::ReferenceFamily, State>> refs_;
  State success_target_;
  State recycle_target_;
};

struct RunResult {
  ProtocolKind kind = ProtocolKind::Bell;
  protocol::SourceParams params;
  std::vector<Outcome> outcomes;  // sorted by (pattern, charlie pattern)
  double success = 0.0;
  double recycle = 0.0;
  double fail = 0.0;
  double completeness = 0.0;
  double min_success_fidelity = 1.0;  // post feed-forward, 1 when class empty
  double min_recycle_fidelity = 1.0;
};

// Source, circuit, measurement, classification, aggregation.
RunResult run_protocol(const protocol::SourceParams& p, ProtocolKind kind);

struct SignatureRow {
  std::string charlie;     // empty for the two-photon protocol
  std::string pattern;
  int interval = 0;
  OutcomeClass cls = OutcomeClass::Fail;
  std::string reference;   // family name, empty for Fail
  std::string feedforward; // empty for Fail
  double probability = 0.0;
};

struct SignatureTable {
  ProtocolKind kind = ProtocolKind::Bell;
  std::vector<SignatureRow> rows;
};

// One row per outcome. Asserts that no click pattern appears with two
// different classifications, which is what lets plain non-number-resolving
// detectors drive the feed-forward.
SignatureTable derive_signature_table(const RunResult& run);

void write_table_csv(const SignatureTable& t, std::ostream& os);
void write_table_json(const SignatureTable& t, std::ostream& os);

}  // namespace hyperecp::detection
