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
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <doctest.h>

#include "hyperecp/detection.hpp"
#include "hyperecp/published_signatures.hpp"
#include "json.hpp"

using namespace hyperecp;
using detection::Click;
using detection::DetectorAssignment;
using detection::Outcome;
using detection::OutcomeClass;
using detection::ProtocolKind;
using detection::RunResult;
using detection::Side;
using fock::cplx;
using fock::Mode;
using fock::Pol;
using fock::State;
using protocol::RefClass;
using protocol::SourceParams;

namespace {

const RunResult& bell_balanced_run() {
  static const RunResult r =
      detection::run_protocol(SourceParams::from_intensities(0.5, 0.5), ProtocolKind::Bell);
  return r;
}

const RunResult& bell_uneven_run() {
  static const RunResult r =
      detection::run_protocol(SourceParams::from_intensities(0.3, 0.4), ProtocolKind::Bell);
  return r;
}

const RunResult& ghz_run() {
  static const RunResult r =
      detection::run_protocol(SourceParams::from_intensities(0.3, 0.4), ProtocolKind::Ghz);
  return r;
}

// Two watched rails on distinct sides plus whatever kept modes a test needs.
DetectorAssignment toy_assignment() {
  DetectorAssignment d;
  d.assign("X", {"x", Pol::H}, Side::Alice);
  d.assign("Y", {"y", Pol::H}, Side::Bob);
  return d;
}

}  // namespace

TEST_SUITE("detection") {

TEST_CASE("detector registry resolves names, rails, and sides") {
  const DetectorAssignment d = detection::bell_assignment();
  REQUIRE(d.names().size() == 8);
  CHECK(d.names().front() == "D1");
  CHECK(d.names().back() == "D8");
  CHECK(d.name_of({"a1'", Pol::H}) == "D1");
  CHECK(d.name_of({"b2", Pol::V}) == "D8");
  CHECK(d.rail_of("D4") == fock::Rail{"a2'", Pol::V});
  CHECK(d.side_of("D3") == Side::Alice);
  CHECK(d.side_of("D6") == Side::Bob);
  CHECK(d.measures({"b1", Pol::V}));
  CHECK_FALSE(d.measures({"a1", Pol::H}));
  CHECK(d.measured_paths() == std::set<std::string>{"a1'", "a2'", "b1", "b2"});
  CHECK_THROWS_AS(d.name_of({"a1", Pol::H}), std::invalid_argument);
  CHECK_THROWS_AS(d.side_of("D9"), std::invalid_argument);

  const DetectorAssignment g = detection::ghz_assignment();
  REQUIRE(g.names().size() == 12);
  CHECK(g.name_of({"c1'", Pol::V}) == "DV1");
  CHECK(g.side_of("DH2") == Side::Charlie);

  DetectorAssignment dup;
  dup.assign("A", {"x", Pol::H}, Side::Alice);
  CHECK_THROWS_AS(dup.assign("A", {"y", Pol::H}, Side::Bob), std::invalid_argument);
  CHECK_THROWS_AS(dup.assign("B", {"x", Pol::H}, Side::Bob), std::invalid_argument);
}

TEST_CASE("click records print sorted with explicit delays") {
  CHECK(detection::pattern_string({{"D3", 2}, {"D1", 0}}) == "D1+D3@2");
  CHECK(detection::pattern_string({{"D5", 0}}) == "D5");
  CHECK(detection::pattern_string({{"D2", 2}, {"D2", 0}}) == "D2+D2@2");
  CHECK(detection::pattern_string({}) == "");
}

TEST_CASE("measurement splits records and weights bunched photons") {
  const DetectorAssignment d = toy_assignment();

  State s;
  s += State::term(0.6, {{"x", Pol::H, 0}, {"y", Pol::H, 0}, {"k", Pol::H, 0}});
  s += State::term(0.8 / std::sqrt(2.0),
                   {{"x", Pol::H, 0}, {"x", Pol::H, 0}, {"k", Pol::V, 0}});
  REQUIRE(std::abs(s.squared_norm() - 1.0) <= 1e-12);

  const auto outcomes = detection::measure(s, d, 2);
  REQUIRE(outcomes.size() == 2);

  std::map<std::string, const Outcome*> by_pattern;
  for (const Outcome& o : outcomes) by_pattern[o.pattern()] = &o;
  REQUIRE(by_pattern.count("X"));
  REQUIRE(by_pattern.count("X+Y"));

  const Outcome& bunched = *by_pattern.at("X");
  CHECK(bunched.ab_clicks.size() == 1);  // one click despite two photons
  CHECK(std::abs(bunched.probability - 0.64) <= 1e-12);
  CHECK(std::abs(fock::fidelity(bunched.collapsed,
                                State::term(1.0, {{"k", Pol::V, 0}})) - 1.0) <= 1e-12);

  const Outcome& split = *by_pattern.at("X+Y");
  CHECK(split.interval == 0);
  CHECK(std::abs(split.probability - 0.36) <= 1e-12);

  // Wrong measured-photon count and photons on a watched path's other rail.
  const State undercounted = State::term(1.0, {{"x", Pol::H, 0}, {"k", Pol::H, 0}});
  CHECK_THROWS_AS(detection::measure(undercounted, d, 2), std::runtime_error);
  const State stray =
      State::term(1.0, {{"x", Pol::H, 0}, {"y", Pol::H, 0}, {"x", Pol::V, 0}});
  CHECK_THROWS_AS(detection::measure(stray, d, 2), std::runtime_error);
}

TEST_CASE("equal-offset timings land in one record and add coherently") {
  const DetectorAssignment d = toy_assignment();
  const cplx a(0.6, 0.0);
  const cplx b(0.0, 0.8);

  State s;
  s += a * State::term(1.0, {{"x", Pol::H, 1}, {"y", Pol::H, 1}, {"k", Pol::H, 0}});
  s += b * State::term(1.0, {{"x", Pol::H, 4}, {"y", Pol::H, 4}, {"k", Pol::V, 0}});

  const auto outcomes = detection::measure(s, d, 2);
  REQUIRE(outcomes.size() == 1);
  const Outcome& o = outcomes.front();
  CHECK(o.pattern() == "X+Y");
  CHECK(o.interval == 0);
  CHECK(std::abs(o.probability - 1.0) <= 1e-12);

  State expected;
  expected += a * State::term(1.0, {{"k", Pol::H, 0}});
  expected += b * State::term(1.0, {{"k", Pol::V, 0}});
  CHECK(std::abs(fock::fidelity(o.collapsed, expected) - 1.0) <= 1e-12);

  // Different gaps stay distinguishable.
  State gaps;
  gaps += a * State::term(1.0, {{"x", Pol::H, 1}, {"y", Pol::H, 2}, {"k", Pol::H, 0}});
  gaps += b * State::term(1.0, {{"x", Pol::H, 2}, {"y", Pol::H, 4}, {"k", Pol::V, 0}});
  const auto two = detection::measure(gaps, d, 2);
  REQUIRE(two.size() == 2);
  CHECK(two[0].interval + two[1].interval == 3);
}

TEST_CASE("classifier fills the match and rejects contradicting click records") {
  const SourceParams p = SourceParams::from_intensities(0.3, 0.4);
  const detection::Classifier classifier(p, ProtocolKind::Bell,
                                         detection::bell_assignment());

  Outcome o;
  o.collapsed = protocol::reference_state({RefClass::Phi0, +1, -1});
  o.ab_clicks = {{"D1", 0}, {"D8", 0}};
  o.interval = 0;
  classifier.classify(o);
  CHECK(o.cls == OutcomeClass::Success);
  REQUIRE(o.reference.has_value());
  CHECK(o.reference->name() == "phi0^{+-}");
  CHECK(o.feedforward.str() == "Z^S");
  CHECK(o.post_ff_fidelity >= 1.0 - 1e-12);

  // Same collapsed state but a lone click: the interval law says Recycle,
  // the fidelity match says Success, so classification must refuse.
  Outcome bad = o;
  bad.ab_clicks = {{"D1", 0}};
  CHECK_THROWS_AS(classifier.classify(bad), std::runtime_error);

  // A product state far from every family fails, but only at interval 1 or 3.
  Outcome fail;
  fail.collapsed = State::term(
      1.0, {{"a1", Pol::H, 0}, {"b1'", Pol::H, 0}});
  fail.ab_clicks = {{"D1", 0}, {"D5", 1}};
  fail.interval = 1;
  classifier.classify(fail);
  CHECK(fail.cls == OutcomeClass::Fail);
  CHECK_FALSE(fail.reference.has_value());

  Outcome stuck = fail;
  stuck.ab_clicks = {{"D1", 0}, {"D5", 0}};
  stuck.interval = 0;
  CHECK_THROWS_AS(classifier.classify(stuck), std::runtime_error);
}

TEST_CASE("balanced run reproduces the three headline aggregates") {
  const RunResult& r = bell_balanced_run();
  CHECK(std::abs(r.success - 0.25) <= 1e-9);
  CHECK(std::abs(r.recycle - 0.25) <= 1e-9);
  CHECK(std::abs(r.fail - 0.50) <= 1e-9);
  CHECK(std::abs(r.completeness - 1.0) <= 1e-9);
  CHECK(r.min_success_fidelity >= 1.0 - 1e-9);
  CHECK(r.min_recycle_fidelity >= 1.0 - 1e-9);
  CHECK(r.outcomes.size() == 188);
}

TEST_CASE("uneven and complex-phase sources keep the closed-form aggregates") {
  const RunResult& r = bell_uneven_run();
  CHECK(std::abs(r.success - 0.2016) <= 1e-9);
  CHECK(std::abs(r.recycle - 0.3016) <= 1e-9);
  CHECK(std::abs(r.fail - (1.0 - 0.2016 - 0.3016)) <= 1e-9);
  CHECK(std::abs(r.completeness - 1.0) <= 1e-9);
  CHECK(r.min_success_fidelity >= 1.0 - 1e-9);
  CHECK(r.min_recycle_fidelity >= 1.0 - 1e-9);

  const RunResult phased = detection::run_protocol(
      SourceParams::from_intensities(0.3, 0.4, 0.7, -1.2), ProtocolKind::Bell);
  CHECK(std::abs(phased.success - r.success) <= 1e-9);
  CHECK(std::abs(phased.recycle - r.recycle) <= 1e-9);
  CHECK(std::abs(phased.fail - r.fail) <= 1e-9);
  CHECK(phased.min_success_fidelity >= 1.0 - 1e-9);
  CHECK(phased.min_recycle_fidelity >= 1.0 - 1e-9);
}

TEST_CASE("click structure obeys the interval law for every outcome") {
  const DetectorAssignment d = detection::bell_assignment();
  for (const RunResult* run : {&bell_balanced_run(), &bell_uneven_run()}) {
    int n_success = 0, n_recycle = 0, n_fail = 0;
    for (const Outcome& o : run->outcomes) {
      const bool pair = o.ab_clicks.size() == 2;
      const bool cross = pair && d.side_of(o.ab_clicks[0].detector) !=
                                     d.side_of(o.ab_clicks[1].detector);
      switch (o.cls) {
        case OutcomeClass::Success:
          ++n_success;
          CHECK(((o.interval == 0 && cross) || o.interval == 2));
          break;
        case OutcomeClass::Recycle:
          ++n_recycle;
          CHECK(o.interval == 0);
          CHECK((o.ab_clicks.size() == 1 || !cross));
          break;
        case OutcomeClass::Fail:
          ++n_fail;
          CHECK((o.interval == 1 || o.interval == 3));
          break;
      }
    }
    CHECK(n_success == 40);
    CHECK(n_recycle == 20);
    CHECK(n_fail == 128);
  }
}

TEST_CASE("family census matches the published row structure") {
  std::map<std::string, int> census;
  int singles = 0;
  for (const Outcome& o : bell_uneven_run().outcomes) {
    if (o.reference) census[o.reference->name()]++;
    if (o.cls == OutcomeClass::Recycle && o.ab_clicks.size() == 1) ++singles;
  }
  CHECK(census["phi0^{++}"] == 16);
  CHECK(census["phi0^{--}"] == 16);
  CHECK(census["phi0^{+-}"] == 4);
  CHECK(census["phi0^{-+}"] == 4);
  CHECK(census["phi1^{++}"] == 8);
  CHECK(census["phi1^{+-}"] == 4);
  CHECK(census["phi1^{-+}"] == 4);
  CHECK(census["phi1^{--}"] == 4);
  CHECK(singles == 8);

  // Every delayed success record belongs to the ++ or -- family.
  for (const Outcome& o : bell_uneven_run().outcomes)
    if (o.cls == OutcomeClass::Success && o.interval == 2)
      CHECK(o.reference->pol_sign == o.reference->spa_sign);
}

TEST_CASE("signature table exports deterministically in both formats") {
  const auto table = detection::derive_signature_table(bell_uneven_run());
  REQUIRE(table.rows.size() == 188);
  for (std::size_t i = 1; i < table.rows.size(); ++i)
    CHECK(table.rows[i - 1].pattern < table.rows[i].pattern);

  std::ostringstream csv1, csv2;
  detection::write_table_csv(table, csv1);
  detection::write_table_csv(table, csv2);
  CHECK(csv1.str() == csv2.str());
  CHECK(csv1.str().rfind("pattern,interval,class,reference,feedforward,probability\n",
                         0) == 0);
  CHECK(csv1.str().find("\"Z^S,Z^P\"") != std::string::npos);

  std::ostringstream js;
  detection::write_table_json(table, js);
  const auto doc = nlohmann::json::parse(js.str());
  CHECK(doc.at("protocol") == "bell");
  REQUIRE(doc.at("rows").size() == 188);
  // Numbers survive the JSON round trip bit for bit.
  for (std::size_t i = 0; i < table.rows.size(); ++i)
    CHECK(doc.at("rows")[i].at("probability").get<double>() ==
          table.rows[i].probability);

  double total = 0.0;
  for (const auto& row : table.rows) total += row.probability;
  CHECK(std::abs(total - 1.0) <= 1e-9);
}

TEST_CASE("a side-preserving relabeling aligns the run with the published rows") {
  CHECK(published::bell_table().size() == 60);
  CHECK(published::ghz_table().size() == 240);

  for (const RunResult* run : {&bell_balanced_run(), &bell_uneven_run()}) {
    const auto rl = published::match_bell(run->outcomes);
    std::set<int> alice(rl.det.begin() + 1, rl.det.begin() + 5);
    std::set<int> bob(rl.det.begin() + 5, rl.det.begin() + 9);
    CHECK(alice == std::set<int>{1, 2, 3, 4});
    CHECK(bob == std::set<int>{5, 6, 7, 8});
    CHECK(rl.str(false).find("relabeling") != std::string::npos);
  }
}

TEST_CASE("three-photon run matches the published table and its aggregates") {
  const RunResult& g = ghz_run();
  CHECK(std::abs(g.success - 0.2016) <= 1e-9);
  CHECK(std::abs(g.recycle - 0.3016) <= 1e-9);
  CHECK(std::abs(g.completeness - 1.0) <= 1e-9);
  CHECK(g.min_success_fidelity >= 1.0 - 1e-9);
  CHECK(g.min_recycle_fidelity >= 1.0 - 1e-9);

  int n_success = 0, n_recycle = 0;
  for (const Outcome& o : g.outcomes) {
    if (o.cls == OutcomeClass::Success) ++n_success;
    if (o.cls == OutcomeClass::Recycle) ++n_recycle;
    if (!o.charlie_clicks.empty()) CHECK(o.charlie_clicks.front().tbin == 0);
  }
  CHECK(n_success == 160);
  CHECK(n_recycle == 80);
  CHECK(g.outcomes.size() == 752);

  CHECK_NOTHROW(published::match_ghz(g.outcomes));
}

TEST_CASE("failure is declared independently of Charlie's click") {
  std::map<std::string, std::set<std::string>> classes_by_ab;
  std::map<std::string, std::set<std::string>> charlies_by_ab;
  for (const Outcome& o : ghz_run().outcomes) {
    classes_by_ab[o.pattern()].insert(detection::outcome_class_name(o.cls));
    charlies_by_ab[o.pattern()].insert(o.charlie_pattern());
  }
  for (const auto& [ab, classes] : classes_by_ab)
    if (classes.count("Fail")) {
      CHECK(classes.size() == 1);
      CHECK(charlies_by_ab.at(ab).size() == 4);
    }
}

TEST_CASE("summing over Charlie reproduces the two-photon distribution") {
  const RunResult& b = bell_uneven_run();
  const RunResult& g = ghz_run();
  CHECK(std::abs(g.success - b.success) <= 1e-9);
  CHECK(std::abs(g.recycle - b.recycle) <= 1e-9);
  CHECK(std::abs(g.fail - b.fail) <= 1e-9);

  std::map<std::string, double> marginal;
  for (const Outcome& o : g.outcomes) marginal[o.pattern()] += o.probability;
  REQUIRE(marginal.size() == b.outcomes.size());
  for (const Outcome& o : b.outcomes) {
    REQUIRE(marginal.count(o.pattern()));
    CHECK(std::abs(marginal.at(o.pattern()) - o.probability) <= 1e-12);
  }
}

TEST_CASE("no click record ever needs photon-number resolution") {
  for (const RunResult* run : {&bell_uneven_run(), &ghz_run()}) {
    std::map<std::pair<std::string, std::string>, std::string> seen;
    for (const Outcome& o : run->outcomes) {
      const auto key = std::make_pair(o.pattern(), o.charlie_pattern());
      const std::string verdict =
          std::string(detection::outcome_class_name(o.cls)) + "/" +
          (o.reference ? o.reference->name() : "");
      auto [it, fresh] = seen.emplace(key, verdict);
      if (!fresh) CHECK(it->second == verdict);
    }
    CHECK_NOTHROW(detection::derive_signature_table(*run));
  }
}

}  // TEST_SUITE
