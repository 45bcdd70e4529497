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
#include <string>
#include <variant>
#include <vector>

#include "hyperecp/fock.hpp"

namespace hyperecp::optics {

using fock::Mode;
using fock::ModeMap;
using fock::Pol;
using fock::Rail;
using fock::State;

// Passive elements, each acting uniformly across time bins.

// 50:50 coupler on both polarizations of two paths; the first-listed path
// keeps the plus sign: a -> (a+b)/sqrt2, b -> (a-b)/sqrt2.
struct BeamSplitter {
  std::string path_a;
  std::string path_b;
};

// H transmits (first input to first output), V reflects (first input to
// second output), unit phases on both arms. Empty output labels mean the
// outputs reuse the input labels.
struct PolarizingBeamSplitter {
  std::string in_a;
  std::string in_b;
  std::string out_a;
  std::string out_b;
};

// Waveplate on one path. Supported settings, by angle in degrees:
//   45    H <-> V
//   22.5  H -> (H+V)/sqrt2, V -> (H-V)/sqrt2
//   0     V -> -V (polarization sign flip)
struct HalfWavePlate {
  std::string path;
  double angle_deg = 45.0;
};

// pi phase on every mode of one path (spatial sign flip).
struct PhaseShifter {
  std::string path;
};

// Lengthens each listed (path, polarization) rail by its whole-bin delay,
// phase 1. Distinct rails commute, so a table acts like the corresponding
// sequence of single-rail delays.
struct ConditionalDelay {
  std::map<Rail, int> table;
};

// Exchanges two path labels with unit phase on both polarizations;
// equivalent to coupler / phase / coupler.
struct PathSwap {
  std::string path_a;
  std::string path_b;
};

using Element = std::variant<BeamSplitter, PolarizingBeamSplitter, HalfWavePlate, PhaseShifter,
                             ConditionalDelay, PathSwap>;

// Substitution table the element induces on creation operators; validates
// the element's fields.
ModeMap element_map(const Element& e);

// Text-format line(s) for the element; multi-rail delays span several lines.
std::string element_str(const Element& e);

struct Circuit {
  std::vector<Element> elements;
};

State apply_element(const State& s, const Element& e);
State apply_circuit(const State& s, const Circuit& c);

// Gram check of the induced matrix over the time lattice.
struct UnitarityReport {
  bool pass = false;
  double max_deviation = 0.0;
  std::string detail;
};
UnitarityReport check_unitarity(const Element& e);
UnitarityReport check_unitarity(const ModeMap& m);

// Text form, one element per line, case-insensitive keywords:
//   BS a b            coupler
//   PBS a b           polarizing splitter, outputs keep the input labels
//   PBS a b -> c d    polarizing splitter with named outputs
//   HWP a 22.5        waveplate (angles 0, 22.5, 45)
//   PS a              path phase flip
//   DELAY a H 2       rail delay in whole bins
//   SWAP a b          path exchange
// '#' starts a comment; blank lines are skipped.
Circuit parse_circuit(std::istream& in);
Circuit parse_circuit_file(const std::string& filename);
std::string format_circuit(const Circuit& c);

}  // namespace hyperecp::optics
