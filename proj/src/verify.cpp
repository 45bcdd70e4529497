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

#include "hyperecp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "hyperecp/analysis.hpp"
#include "hyperecp/detection.hpp"
#include "hyperecp/equations.hpp"
#include "hyperecp/format.hpp"
#include "hyperecp/published_signatures.hpp"

namespace hyperecp::verify {

using detection::Outcome;
using detection::OutcomeClass;
using detection::ProtocolKind;
using detection::RunResult;
using fock::State;
using protocol::SourceParams;

namespace {

struct Check {
  bool pass = false;
  std::string text;
};

// The expensive enumerations every criterion shares.
struct Runs {
  RunResult bell_balanced;
  RunResult bell_uneven;
  RunResult ghz_uneven;
};

Runs make_runs() {
  Runs r;
  r.bell_balanced = detection::run_protocol(SourceParams::from_intensities(0.5, 0.5),
                                            ProtocolKind::Bell);
  r.bell_uneven = detection::run_protocol(SourceParams::from_intensities(0.3, 0.4),
                                          ProtocolKind::Bell);
  r.ghz_uneven = detection::run_protocol(SourceParams::from_intensities(0.3, 0.4),
                                         ProtocolKind::Ghz);
  return r;
}

Check closed_form_checkpoints() {
  const SourceParams balanced = SourceParams::from_intensities(0.5, 0.5);
  const SourceParams p = SourceParams::from_intensities(0.3, 0.4);

  double worst = 1.0;
  const State front_balanced =
      optics::apply_circuit(protocol::bell_input(balanced), protocol::bell_front_end());
  worst = std::min(worst,
                   fock::fidelity(front_balanced, equations::front_end_balanced_expected()));

  const State front =
      optics::apply_circuit(protocol::bell_input(p), protocol::bell_front_end());
  worst = std::min(worst, fock::fidelity(front, equations::front_end_expected(p)));

  const State flipped = optics::apply_circuit(front, protocol::bell_bprime_flip());
  worst = std::min(worst, fock::fidelity(flipped, equations::post_flip_expected(p)));

  const State ghz_front =
      optics::apply_circuit(protocol::ghz_input(p), protocol::bell_front_end());
  worst = std::min(worst, fock::fidelity(ghz_front, equations::ghz_front_end_expected(p)));

  return {worst >= 1.0 - 1e-12,
          "stage states match their closed forms (worst fidelity deficit " +
              fmt::g17(1.0 - worst) + ")"};
}

Check first_round_success(const Runs& runs) {
  const double dev = std::abs(runs.bell_balanced.success - 0.25);
  return {dev <= 1e-9,
          "balanced success aggregate 0.25 (deviation " + fmt::g17(dev) + ")"};
}

Check second_round_forms() {
  const double balanced_p2 =
      analysis::analytic_probs(SourceParams::from_intensities(0.5, 0.5)).p2;
  const double dev = std::abs(balanced_p2 - 0.3125);
  // analytic_probs rejects any grid point where the two algebraic forms of
  // the two-round success drift past 1e-12.
  for (int i = 1; i <= 10; ++i)
    for (int j = 1; j <= 10; ++j)
      analysis::analytic_probs(SourceParams::from_intensities(i * 0.05, j * 0.05));
  return {dev <= 1e-12,
          "two-round success forms agree on the 100-point grid; balanced value "
          "0.3125 (deviation " +
              fmt::g17(dev) + ")"};
}

Check sweep_accuracy() {
  const auto rows = analysis::sweep({});
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, r.max_dev);
  return {rows.size() == 100 && worst <= 1e-9,
          "simulation tracks the closed forms across the default sweep (" +
              std::to_string(rows.size()) + " points, worst deviation " +
              fmt::g17(worst) + ")"};
}

Check bell_table_equivalence(const Runs& runs) {
  const auto rl = published::match_bell(runs.bell_uneven.outcomes);
  const bool fid = runs.bell_uneven.min_success_fidelity >= 1.0 - 1e-9 &&
                   runs.bell_uneven.min_recycle_fidelity >= 1.0 - 1e-9;
  return {fid, "two-photon table aligns with the published rows (" + rl.str(false) +
                   "); worst corrected fidelity " +
                   fmt::g17(std::min(runs.bell_uneven.min_success_fidelity,
                                     runs.bell_uneven.min_recycle_fidelity))};
}

Check interval_law(const Runs& runs) {
  const detection::DetectorAssignment d = detection::bell_assignment();
  long violations = 0;
  long total = 0;
  for (const RunResult* run :
       {&runs.bell_balanced, &runs.bell_uneven, &runs.ghz_uneven}) {
    for (const Outcome& o : run->outcomes) {
      ++total;
      const bool pair = o.ab_clicks.size() == 2;
      const bool cross = pair && d.side_of(o.ab_clicks[0].detector) !=
                                     d.side_of(o.ab_clicks[1].detector);
      bool ok = false;
      switch (o.cls) {
        case OutcomeClass::Success:
          ok = (o.interval == 0 && cross) || o.interval == 2;
          break;
        case OutcomeClass::Recycle:
          ok = o.interval == 0 && (o.ab_clicks.size() == 1 || (pair && !cross));
          break;
        case OutcomeClass::Fail:
          ok = o.interval == 1 || o.interval == 3;
          break;
      }
      if (!ok) ++violations;
    }
  }
  return {violations == 0, "click intervals separate the classes on all " +
                               std::to_string(total) + " outcomes (" +
                               std::to_string(violations) + " violations)"};
}

Check ghz_suite(const Runs& runs) {
  const RunResult& g = runs.ghz_uneven;
  const double p1 = analysis::analytic_probs(g.params).p1;
  const double dev = std::abs(g.success - p1);
  bool ok = dev <= 1e-9;

  std::string detail = "three-photon success deviation " + fmt::g17(dev);
  try {
    const auto rl = published::match_ghz(g.outcomes);
    detail += "; " + rl.str(true);
  } catch (const std::exception& e) {
    ok = false;
    detail += std::string("; table alignment failed: ") + e.what();
  }

  std::map<std::string, std::set<std::string>> classes_by_ab;
  for (const Outcome& o : g.outcomes)
    classes_by_ab[o.pattern()].insert(detection::outcome_class_name(o.cls));
  for (const auto& [ab, classes] : classes_by_ab)
    if (classes.count("Fail") != 0 && classes.size() > 1) ok = false;
  detail += "; failure independent of Charlie";

  return {ok, detail};
}

Check recycled_rounds() {
  std::mt19937 rng(20260815u);
  std::uniform_real_distribution<double> draw(0.05, 0.5);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double a2 = draw(rng);
    const double g2 = draw(rng);
    const auto round =
        analysis::recycled_round_check(SourceParams::from_intensities(a2, g2));
    worst = std::max(worst, round.deviation);
  }
  return {worst <= 1e-9,
          "recycled-round success matches its closed form on 10 drawn parameter "
          "pairs (worst deviation " +
              fmt::g17(worst) + ")"};
}

Check physics_suite(const Runs& runs) {
  bool ok = true;
  std::string detail;

  // Two identical photons on a balanced coupler never split.
  double hom = 0.0;
  std::vector<optics::Element> elements;
  for (const auto& c : {protocol::build_bell_circuit(), protocol::build_ghz_circuit()})
    elements.insert(elements.end(), c.elements.begin(), c.elements.end());
  elements.push_back(optics::BeamSplitter{"x", "y"});
  for (const auto& el : elements) {
    const auto* bs = std::get_if<optics::BeamSplitter>(&el);
    if (bs == nullptr) continue;
    for (const fock::Pol pol : {fock::Pol::H, fock::Pol::V}) {
      const State in = State::term(
          1.0, {{bs->path_a, pol, 0}, {bs->path_b, pol, 0}});
      const State out = optics::apply_element(in, el);
      const auto it = out.terms().find(
          fock::Monomial({{bs->path_a, pol, 0}, {bs->path_b, pol, 0}}));
      if (it != out.terms().end()) hom = std::max(hom, std::abs(it->second));
    }
  }
  ok = ok && hom <= 1e-12;
  detail += "coincidence residue " + fmt::g17(hom);

  // Every catalogue element, as used plus reference instances, is unitary.
  elements.push_back(optics::PolarizingBeamSplitter{"x", "y", "", ""});
  elements.push_back(optics::PolarizingBeamSplitter{"x", "y", "u", "w"});
  elements.push_back(optics::HalfWavePlate{"x", 45.0});
  elements.push_back(optics::HalfWavePlate{"x", 22.5});
  elements.push_back(optics::HalfWavePlate{"x", 0.0});
  elements.push_back(optics::PhaseShifter{"x"});
  elements.push_back(optics::ConditionalDelay{{{{"x", fock::Pol::H}, 2}}});
  elements.push_back(optics::PathSwap{"x", "y"});
  double unit = 0.0;
  for (const auto& el : elements)
    unit = std::max(unit, optics::check_unitarity(el).max_deviation);
  ok = ok && unit <= 1e-12;
  detail += "; unitarity deviation " + fmt::g17(unit);

  // Norm conservation through both full circuits.
  const SourceParams p = SourceParams::from_intensities(0.3, 0.4);
  double norm_dev = 0.0;
  for (const auto& [input, circuit] :
       {std::make_pair(protocol::bell_input(p), protocol::build_bell_circuit()),
        std::make_pair(protocol::ghz_input(p), protocol::build_ghz_circuit())}) {
    const State evolved = optics::apply_circuit(input, circuit);
    norm_dev = std::max(norm_dev,
                        std::abs(evolved.squared_norm() - input.squared_norm()));
  }
  ok = ok && norm_dev <= 1e-12;
  detail += "; norm drift " + fmt::g17(norm_dev);

  double compl_dev = 0.0;
  for (const RunResult* run :
       {&runs.bell_balanced, &runs.bell_uneven, &runs.ghz_uneven})
    compl_dev = std::max(compl_dev, std::abs(run->completeness - 1.0));
  ok = ok && compl_dev <= 1e-9;
  detail += "; completeness deviation " + fmt::g17(compl_dev);

  try {
    detection::derive_signature_table(runs.bell_uneven);
    detection::derive_signature_table(runs.ghz_uneven);
    detail += "; click records never need photon-number resolution";
  } catch (const std::exception& e) {
    ok = false;
    detail += std::string("; number-resolution conflict: ") + e.what();
  }

  return {ok, detail};
}

std::optional<std::string> capture(const std::string& cmd) {
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return std::nullopt;
  std::string out;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  if (pclose(pipe) != 0) return std::nullopt;
  return out;
}

int run_core(std::ostream& os) {
  const Runs runs = make_runs();

  int idx = 0;
  int fails = 0;
  auto report = [&](const std::function<Check()>& fn) {
    ++idx;
    Check c;
    try {
      c = fn();
    } catch (const std::exception& e) {
      c = {false, std::string("exception: ") + e.what()};
    }
    os << (c.pass ? "[PASS] " : "[FAIL] ") << idx << ". " << c.text << "\n";
    if (!c.pass) ++fails;
  };

  report([&] { return closed_form_checkpoints(); });
  report([&] { return first_round_success(runs); });
  report([&] { return second_round_forms(); });
  report([&] { return sweep_accuracy(); });
  report([&] { return bell_table_equivalence(runs); });
  report([&] { return interval_law(runs); });
  report([&] { return ghz_suite(runs); });
  report([&] { return recycled_rounds(); });
  report([&] { return physics_suite(runs); });
  return fails;
}

}  // namespace

int run_acceptance(std::ostream& os, const Options& opt) {
  std::ostringstream first;
  std::ostringstream second;
  int fails = run_core(first);
  run_core(second);
  os << first.str();

  bool det = first.str() == second.str();
  std::string detail = det ? "report renders byte-identically twice"
                           : "report differs between renders";
  if (opt.cli_exe.empty()) {
    det = false;
    detail += "; no executable supplied for the rerun check";
  } else {
    for (const char* args : {"run --protocol bell --alpha2 0.3 --gamma2 0.4",
                             "run --protocol ghz --alpha2 0.5 --gamma2 0.5"}) {
      const std::string cmd = "\"" + opt.cli_exe + "\" " + args + " 2>/dev/null";
      const auto once = capture(cmd);
      const auto twice = capture(cmd);
      if (!once || !twice || *once != *twice || once->empty()) {
        det = false;
        detail += std::string("; rerun mismatch for `") + args + "`";
      }
    }
    if (det) detail += "; reruns byte-identical";
  }
  os << (det ? "[PASS] " : "[FAIL] ") << "10. " << detail << "\n";
  if (!det) ++fails;

  os << (fails == 0 ? "all acceptance checks passed"
                    : std::to_string(fails) + " acceptance check(s) failed")
     << "\n";
  return fails;
}

}  // namespace hyperecp::verify
