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

#include "hyperecp/optics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hyperecp::optics {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

void require_path(const std::string& p, const char* what) {
  if (p.empty()) throw std::invalid_argument(std::string(what) + " has an empty path label");
}

void require_distinct(const std::string& a, const std::string& b, const char* what) {
  if (a == b) throw std::invalid_argument(std::string(what) + " needs two distinct paths, got '" + a + "' twice");
}

ModeMap map_of(const BeamSplitter& e) {
  require_path(e.path_a, "BS");
  require_path(e.path_b, "BS");
  require_distinct(e.path_a, e.path_b, "BS");
  ModeMap m;
  for (Pol p : {Pol::H, Pol::V}) {
    m.set(Rail{e.path_a, p},
          {{Rail{e.path_a, p}, 0, kInvSqrt2}, {Rail{e.path_b, p}, 0, kInvSqrt2}});
    m.set(Rail{e.path_b, p},
          {{Rail{e.path_a, p}, 0, kInvSqrt2}, {Rail{e.path_b, p}, 0, -kInvSqrt2}});
  }
  return m;
}

ModeMap map_of(const PolarizingBeamSplitter& e) {
  require_path(e.in_a, "PBS");
  require_path(e.in_b, "PBS");
  require_distinct(e.in_a, e.in_b, "PBS");
  const std::string out_a = e.out_a.empty() ? e.in_a : e.out_a;
  const std::string out_b = e.out_b.empty() ? e.in_b : e.out_b;
  require_distinct(out_a, out_b, "PBS output");
  ModeMap m;
  m.set(Rail{e.in_a, Pol::H}, {{Rail{out_a, Pol::H}, 0, 1.0}});
  m.set(Rail{e.in_b, Pol::H}, {{Rail{out_b, Pol::H}, 0, 1.0}});
  m.set(Rail{e.in_a, Pol::V}, {{Rail{out_b, Pol::V}, 0, 1.0}});
  m.set(Rail{e.in_b, Pol::V}, {{Rail{out_a, Pol::V}, 0, 1.0}});
  return m;
}

ModeMap map_of(const HalfWavePlate& e) {
  require_path(e.path, "HWP");
  const Rail h{e.path, Pol::H};
  const Rail v{e.path, Pol::V};
  ModeMap m;
  if (std::abs(e.angle_deg - 45.0) < 1e-9) {
    m.set(h, {{v, 0, 1.0}});
    m.set(v, {{h, 0, 1.0}});
  } else if (std::abs(e.angle_deg - 22.5) < 1e-9) {
    m.set(h, {{h, 0, kInvSqrt2}, {v, 0, kInvSqrt2}});
    m.set(v, {{h, 0, kInvSqrt2}, {v, 0, -kInvSqrt2}});
  } else if (std::abs(e.angle_deg) < 1e-9) {
    m.set(h, {{h, 0, 1.0}});
    m.set(v, {{v, 0, -1.0}});
  } else {
    throw std::invalid_argument("unsupported HWP angle " + std::to_string(e.angle_deg) +
                                " (supported: 0, 22.5, 45)");
  }
  return m;
}

ModeMap map_of(const PhaseShifter& e) {
  require_path(e.path, "PS");
  ModeMap m;
  for (Pol p : {Pol::H, Pol::V}) m.set(Rail{e.path, p}, {{Rail{e.path, p}, 0, -1.0}});
  return m;
}

ModeMap map_of(const ConditionalDelay& e) {
  if (e.table.empty()) throw std::invalid_argument("DELAY with an empty rail table");
  ModeMap m;
  for (const auto& [rail, bins] : e.table) {
    require_path(rail.path, "DELAY");
    if (bins < 1)
      throw std::invalid_argument("DELAY on " + rail.str() + " must last at least one bin");
    m.set(rail, {{rail, bins, 1.0}});
  }
  return m;
}

ModeMap map_of(const PathSwap& e) {
  require_path(e.path_a, "SWAP");
  require_path(e.path_b, "SWAP");
  require_distinct(e.path_a, e.path_b, "SWAP");
  ModeMap m;
  for (Pol p : {Pol::H, Pol::V}) {
    m.set(Rail{e.path_a, p}, {{Rail{e.path_b, p}, 0, 1.0}});
    m.set(Rail{e.path_b, p}, {{Rail{e.path_a, p}, 0, 1.0}});
  }
  return m;
}

std::string angle_str(double deg) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", deg);
  return buf;
}

}  // namespace

ModeMap element_map(const Element& e) {
  return std::visit([](const auto& v) { return map_of(v); }, e);
}

std::string element_str(const Element& e) {
  struct Fmt {
    std::string operator()(const BeamSplitter& b) const { return "BS " + b.path_a + " " + b.path_b; }
    std::string operator()(const PolarizingBeamSplitter& b) const {
      std::string s = "PBS " + b.in_a + " " + b.in_b;
      const std::string oa = b.out_a.empty() ? b.in_a : b.out_a;
      const std::string ob = b.out_b.empty() ? b.in_b : b.out_b;
      if (oa != b.in_a || ob != b.in_b) s += " -> " + oa + " " + ob;
      return s;
    }
    std::string operator()(const HalfWavePlate& w) const {
      return "HWP " + w.path + " " + angle_str(w.angle_deg);
    }
    std::string operator()(const PhaseShifter& p) const { return "PS " + p.path; }
    std::string operator()(const ConditionalDelay& d) const {
      std::string s;
      for (const auto& [rail, bins] : d.table) {
        if (!s.empty()) s += "\n";
        s += "DELAY " + rail.path + " " + fock::pol_name(rail.pol) + " " + std::to_string(bins);
      }
      return s;
    }
    std::string operator()(const PathSwap& p) const { return "SWAP " + p.path_a + " " + p.path_b; }
  };
  return std::visit(Fmt{}, e);
}

State apply_element(const State& s, const Element& e) {
  return apply_mode_map(s, element_map(e));
}

State apply_circuit(const State& s, const Circuit& c) {
  State out = s;
  for (const Element& e : c.elements) out = apply_element(out, e);
  return out;
}

UnitarityReport check_unitarity(const ModeMap& m) {
  const fock::IsometryReport rep = fock::check_isometry(m);
  return UnitarityReport{rep.pass, rep.max_deviation, rep.detail};
}

UnitarityReport check_unitarity(const Element& e) {
  return check_unitarity(element_map(e));
}

namespace {

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  return s;
}

Pol parse_pol(const std::string& tok, int line_no) {
  const std::string u = upper(tok);
  if (u == "H") return Pol::H;
  if (u == "V") return Pol::V;
  throw std::invalid_argument("line " + std::to_string(line_no) + ": polarization must be H or V, got '" + tok + "'");
}

[[noreturn]] void parse_fail(int line_no, const std::string& why) {
  throw std::invalid_argument("line " + std::to_string(line_no) + ": " + why);
}

}  // namespace

Circuit parse_circuit(std::istream& in) {
  Circuit c;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    std::string t;
    while (ls >> t) tok.push_back(t);
    if (tok.empty()) continue;

    const std::string kw = upper(tok[0]);
    Element e;
    if (kw == "BS") {
      if (tok.size() != 3) parse_fail(line_no, "BS expects two paths");
      e = BeamSplitter{tok[1], tok[2]};
    } else if (kw == "PBS") {
      if (tok.size() == 3) {
        e = PolarizingBeamSplitter{tok[1], tok[2], "", ""};
      } else if (tok.size() == 6 && tok[3] == "->") {
        e = PolarizingBeamSplitter{tok[1], tok[2], tok[4], tok[5]};
      } else {
        parse_fail(line_no, "PBS expects 'PBS a b' or 'PBS a b -> c d'");
      }
    } else if (kw == "HWP") {
      if (tok.size() != 3) parse_fail(line_no, "HWP expects a path and an angle");
      char* end = nullptr;
      const double deg = std::strtod(tok[2].c_str(), &end);
      if (end == tok[2].c_str() || *end != '\0') parse_fail(line_no, "bad HWP angle '" + tok[2] + "'");
      e = HalfWavePlate{tok[1], deg};
    } else if (kw == "PS") {
      if (tok.size() != 2) parse_fail(line_no, "PS expects one path");
      e = PhaseShifter{tok[1]};
    } else if (kw == "DELAY") {
      if (tok.size() != 4) parse_fail(line_no, "DELAY expects path, polarization, bins");
      char* end = nullptr;
      const long bins = std::strtol(tok[3].c_str(), &end, 10);
      if (end == tok[3].c_str() || *end != '\0') parse_fail(line_no, "bad DELAY bin count '" + tok[3] + "'");
      ConditionalDelay d;
      d.table[Rail{tok[1], parse_pol(tok[2], line_no)}] = static_cast<int>(bins);
      e = d;
    } else if (kw == "SWAP") {
      if (tok.size() != 3) parse_fail(line_no, "SWAP expects two paths");
      e = PathSwap{tok[1], tok[2]};
    } else {
      parse_fail(line_no, "unknown element '" + tok[0] + "'");
    }

    try {
      element_map(e);
    } catch (const std::invalid_argument& err) {
      parse_fail(line_no, err.what());
    }
    c.elements.push_back(std::move(e));
  }
  return c;
}

Circuit parse_circuit_file(const std::string& filename) {
  std::ifstream in(filename);
  if (!in) throw std::invalid_argument("cannot open circuit file '" + filename + "'");
  return parse_circuit(in);
}

std::string format_circuit(const Circuit& c) {
  std::string out;
  for (const Element& e : c.elements) {
    out += element_str(e);
    out += "\n";
  }
  return out;
}

}  // namespace hyperecp::optics
