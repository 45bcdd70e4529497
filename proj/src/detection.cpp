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

#include "hyperecp/detection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "hyperecp/format.hpp"
#include "json.hpp"

namespace hyperecp::detection {

using fock::Mode;
using fock::Monomial;
using fock::Pol;
using fock::rail_of;
using protocol::RefClass;
using protocol::ReferenceFamily;

const char* side_name(Side s) {
  switch (s) {
    case Side::Alice: return "alice";
    case Side::Bob: return "bob";
    case Side::Charlie: return "charlie";
  }
  throw std::logic_error("side_name: bad enum");
}

void DetectorAssignment::assign(std::string name, Rail rail, Side side) {
  if (by_name_.count(name) != 0)
    throw std::invalid_argument("detector name reused: " + name);
  if (by_rail_.count(rail) != 0)
    throw std::invalid_argument("rail watched twice: " + rail.str());
  by_rail_.emplace(rail, name);
  by_name_.emplace(name, std::make_pair(rail, side));
  order_.push_back(std::move(name));
  paths_.insert(rail.path);
}

const std::string& DetectorAssignment::name_of(const Rail& r) const {
  auto it = by_rail_.find(r);
  if (it == by_rail_.end())
    throw std::invalid_argument("no detector on rail " + r.str());
  return it->second;
}

const Rail& DetectorAssignment::rail_of(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) throw std::invalid_argument("unknown detector " + name);
  return it->second.first;
}

Side DetectorAssignment::side_of(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) throw std::invalid_argument("unknown detector " + name);
  return it->second.second;
}

DetectorAssignment bell_assignment() {
  DetectorAssignment d;
  d.assign("D1", {"a1'", Pol::H}, Side::Alice);
  d.assign("D2", {"a1'", Pol::V}, Side::Alice);
  d.assign("D3", {"a2'", Pol::H}, Side::Alice);
  d.assign("D4", {"a2'", Pol::V}, Side::Alice);
  d.assign("D5", {"b1", Pol::H}, Side::Bob);
  d.assign("D6", {"b1", Pol::V}, Side::Bob);
  d.assign("D7", {"b2", Pol::H}, Side::Bob);
  d.assign("D8", {"b2", Pol::V}, Side::Bob);
  return d;
}

DetectorAssignment ghz_assignment() {
  DetectorAssignment d = bell_assignment();
  d.assign("DH1", {"c1'", Pol::H}, Side::Charlie);
  d.assign("DV1", {"c1'", Pol::V}, Side::Charlie);
  d.assign("DH2", {"c2'", Pol::H}, Side::Charlie);
  d.assign("DV2", {"c2'", Pol::V}, Side::Charlie);
  return d;
}

std::string pattern_string(const std::vector<Click>& clicks) {
  std::vector<Click> sorted = clicks;
  std::sort(sorted.begin(), sorted.end());
  std::string out;
  for (const Click& c : sorted) {
    if (!out.empty()) out += '+';
    out += c.detector;
    if (c.tbin != 0) out += "@" + std::to_string(c.tbin);
  }
  return out;
}

const char* outcome_class_name(OutcomeClass c) {
  switch (c) {
    case OutcomeClass::Success: return "Success";
    case OutcomeClass::Recycle: return "Recycle";
    case OutcomeClass::Fail: return "Fail";
  }
  throw std::logic_error("outcome_class_name: bad enum");
}

std::vector<Outcome> measure(const State& s, const DetectorAssignment& d,
                             int expected_measured) {
  const double total = s.squared_norm();
  if (total <= 0.0) throw std::invalid_argument("measure: empty state");

  std::map<Monomial, State> groups;
  for (const auto& [mono, amp] : s.terms()) {
    std::vector<Mode> meas;
    std::vector<Mode> kept;
    for (const Mode& m : mono.modes()) {
      if (d.measures(rail_of(m))) {
        meas.push_back(m);
      } else if (d.measured_paths().count(m.path) != 0) {
        throw std::runtime_error("measure: photon on unwatched rail " +
                                 rail_of(m).str());
      } else {
        kept.push_back(m);
      }
    }
    if (static_cast<int>(meas.size()) != expected_measured)
      throw std::runtime_error("measure: monomial " + mono.str() + " carries " +
                               std::to_string(meas.size()) +
                               " measured photons, expected " +
                               std::to_string(expected_measured));

    int shift = std::numeric_limits<int>::max();
    for (const Mode& m : meas)
      if (d.side_of(d.name_of(rail_of(m))) != Side::Charlie)
        shift = std::min(shift, m.tbin);
    if (shift == std::numeric_limits<int>::max()) shift = 0;
    for (Mode& m : meas)
      if (d.side_of(d.name_of(rail_of(m))) != Side::Charlie) m.tbin -= shift;

    Monomial key{std::move(meas)};
    Monomial rest{std::move(kept)};
    groups[std::move(key)].add(amp, std::move(rest));
  }

  std::vector<Outcome> out;
  double sum = 0.0;
  for (const auto& [key, group] : groups) {
    const State merged = group.pruned();
    if (merged.empty()) continue;

    Outcome o;
    o.probability = key.factorial_weight() * merged.squared_norm() / total;
    o.collapsed = merged.normalized();

    std::set<Click> ab;
    std::set<Click> charlie;
    for (const Mode& m : key.modes()) {
      const std::string& name = d.name_of(rail_of(m));
      (d.side_of(name) == Side::Charlie ? charlie : ab).insert(Click{name, m.tbin});
    }
    o.ab_clicks.assign(ab.begin(), ab.end());
    o.charlie_clicks.assign(charlie.begin(), charlie.end());
    for (const Click& c : o.ab_clicks) o.interval = std::max(o.interval, c.tbin);

    sum += o.probability;
    out.push_back(std::move(o));
  }

  if (std::abs(sum - 1.0) > fock::tol::probability)
    throw std::runtime_error("measure: outcome probabilities sum to " +
                             fmt::g17(sum));
  return out;
}

Classifier::Classifier(const protocol::SourceParams& p, ProtocolKind kind,
                       DetectorAssignment assignment)
    : assignment_(std::move(assignment)) {
  const auto families = kind == ProtocolKind::Bell
                            ? protocol::bell_outcome_families()
                            : protocol::ghz_outcome_families();
  for (const ReferenceFamily& f : families)
    refs_.emplace_back(f, protocol::reference_state(f, p));
  const RefClass keep = kind == ProtocolKind::Bell ? RefClass::Phi0 : RefClass::Psi0;
  const RefClass redo = kind == ProtocolKind::Bell ? RefClass::Phi1 : RefClass::Psi1;
  success_target_ = protocol::reference_state({keep, +1, +1});
  recycle_target_ = protocol::reference_state({redo, +1, +1}, p);
}

void Classifier::classify(Outcome& o) const {
  double best = 0.0;
  double second = 0.0;
  const ReferenceFamily* match = nullptr;
  for (const auto& [family, ref] : refs_) {
    const double f = fock::fidelity(o.collapsed, ref);
    if (f > best) {
      second = best;
      best = f;
      match = &family;
    } else {
      second = std::max(second, f);
    }
  }

  const double threshold = 1.0 - fock::tol::fidelity_match;
  const std::string where = " for record " + o.pattern();

  if (best < threshold) {
    o.cls = OutcomeClass::Fail;
    o.reference.reset();
    o.feedforward = {};
    o.post_ff_fidelity = 0.0;
    if (o.interval != 1 && o.interval != 3)
      throw std::runtime_error("unclassified outcome at interval " +
                               std::to_string(o.interval) + where);
    return;
  }
  if (second >= threshold)
    throw std::runtime_error("ambiguous reference match" + where);

  o.reference = *match;
  o.feedforward = match->correction();
  o.cls = match->cls == RefClass::Phi0 || match->cls == RefClass::Psi0
              ? OutcomeClass::Success
              : OutcomeClass::Recycle;

  const bool pair = o.ab_clicks.size() == 2;
  const bool cross_side =
      pair && assignment_.side_of(o.ab_clicks[0].detector) !=
                  assignment_.side_of(o.ab_clicks[1].detector);
  const bool interval_ok =
      o.cls == OutcomeClass::Success
          ? (o.interval == 0 && cross_side) || o.interval == 2
          : o.interval == 0 && (o.ab_clicks.size() == 1 || (pair && !cross_side));
  if (!interval_ok)
    throw std::runtime_error(std::string("click record contradicts class ") +
                             outcome_class_name(o.cls) + where);

  const State corrected = protocol::feed_forward(o.collapsed, o.feedforward);
  const State& target =
      o.cls == OutcomeClass::Success ? success_target_ : recycle_target_;
  o.post_ff_fidelity = fock::fidelity(corrected, target);
  if (o.post_ff_fidelity < threshold)
    throw std::runtime_error("feed-forward missed its target" + where);
}

RunResult run_protocol(const protocol::SourceParams& p, ProtocolKind kind) {
  p.validate();

  RunResult r;
  r.kind = kind;
  r.params = p;

  const bool bell = kind == ProtocolKind::Bell;
  const State input = bell ? protocol::bell_input(p) : protocol::ghz_input(p);
  const optics::Circuit circuit =
      bell ? protocol::build_bell_circuit() : protocol::build_ghz_circuit();
  const State evolved = optics::apply_circuit(input, circuit);
  const DetectorAssignment d = bell ? bell_assignment() : ghz_assignment();

  r.outcomes = measure(evolved, d, bell ? 2 : 3);

  const Classifier classifier(p, kind, d);
  for (Outcome& o : r.outcomes) classifier.classify(o);

  std::sort(r.outcomes.begin(), r.outcomes.end(),
            [](const Outcome& a, const Outcome& b) {
              const auto ka = std::make_pair(a.pattern(), a.charlie_pattern());
              const auto kb = std::make_pair(b.pattern(), b.charlie_pattern());
              return ka < kb;
            });

  for (const Outcome& o : r.outcomes) {
    r.completeness += o.probability;
    switch (o.cls) {
      case OutcomeClass::Success:
        r.success += o.probability;
        r.min_success_fidelity = std::min(r.min_success_fidelity, o.post_ff_fidelity);
        break;
      case OutcomeClass::Recycle:
        r.recycle += o.probability;
        r.min_recycle_fidelity = std::min(r.min_recycle_fidelity, o.post_ff_fidelity);
        break;
      case OutcomeClass::Fail:
        r.fail += o.probability;
        break;
    }
  }
  return r;
}

SignatureTable derive_signature_table(const RunResult& run) {
  SignatureTable t;
  t.kind = run.kind;

  std::map<std::pair<std::string, std::string>, std::string> seen;
  for (const Outcome& o : run.outcomes) {
    SignatureRow row;
    row.charlie = o.charlie_pattern();
    row.pattern = o.pattern();
    row.interval = o.interval;
    row.cls = o.cls;
    if (o.reference) {
      row.reference = o.reference->name();
      row.feedforward = o.feedforward.str();
    }
    row.probability = o.probability;

    const auto key = std::make_pair(row.pattern, row.charlie);
    const std::string verdict =
        std::string(outcome_class_name(row.cls)) + "/" + row.reference;
    auto [it, fresh] = seen.emplace(key, verdict);
    if (!fresh && it->second != verdict)
      throw std::runtime_error("click record " + row.pattern +
                               " maps to two classes; number resolution would be needed");
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_table_csv(const SignatureTable& t, std::ostream& os) {
  const bool ghz = t.kind == ProtocolKind::Ghz;
  if (ghz) os << "charlie,";
  os << "pattern,interval,class,reference,feedforward,probability\n";
  for (const SignatureRow& r : t.rows) {
    if (ghz) os << fmt::csv_field(r.charlie) << ',';
    os << fmt::csv_field(r.pattern) << ',' << r.interval << ','
       << outcome_class_name(r.cls) << ',' << fmt::csv_field(r.reference) << ','
       << fmt::csv_field(r.feedforward) << ',' << fmt::g17(r.probability) << '\n';
  }
}

void write_table_json(const SignatureTable& t, std::ostream& os) {
  nlohmann::ordered_json doc;
  doc["protocol"] = t.kind == ProtocolKind::Ghz ? "ghz" : "bell";
  doc["rows"] = nlohmann::ordered_json::array();
  for (const SignatureRow& r : t.rows) {
    nlohmann::ordered_json row;
    if (t.kind == ProtocolKind::Ghz) row["charlie"] = r.charlie;
    row["pattern"] = r.pattern;
    row["interval"] = r.interval;
    row["class"] = outcome_class_name(r.cls);
    row["reference"] = r.reference;
    row["feedforward"] = r.feedforward;
    row["probability"] = r.probability;
    doc["rows"].push_back(std::move(row));
  }
  os << doc.dump(2) << '\n';
}

}  // namespace hyperecp::detection
