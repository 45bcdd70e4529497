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

#include "hyperecp/equations.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyperecp::equations {

using fock::cplx;
using fock::Mode;
using fock::Monomial;
using fock::Pol;

namespace {

constexpr const char* kA1 = "a1";
constexpr const char* kA2 = "a2";
constexpr const char* kB1 = "b1";
constexpr const char* kB2 = "b2";
constexpr const char* kA1p = "a1'";
constexpr const char* kA2p = "a2'";
constexpr const char* kB1p = "b1'";
constexpr const char* kB2p = "b2'";
constexpr const char* kC1 = "c1";
constexpr const char* kC2 = "c2";
constexpr const char* kC1p = "c1'";
constexpr const char* kC2p = "c2'";

Pol pol_of(char c) { return c == 'H' ? Pol::H : Pol::V; }

// Adds a normalized multi-photon ket: the written coefficient of a ket with
// repeated modes exceeds the stored creation-operator amplitude by the square
// root of the occupation-factorial weight.
void add_ket(fock::State& s, cplx coeff, const std::string& pols,
             const std::vector<const char*>& paths, const std::vector<int>& times = {}) {
  if (pols.size() != paths.size())
    throw std::invalid_argument("ket arity mismatch");
  std::vector<Mode> modes;
  modes.reserve(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i)
    modes.push_back(Mode{paths[i], pol_of(pols[i]), times.empty() ? 0 : times[i]});
  Monomial m(modes);
  const double w = m.factorial_weight();
  s.add(coeff / std::sqrt(w), std::move(m));
}

// Kept-photon term of a two-kept/two-measured group: sign times a two-letter
// polarization pattern on the kept paths.
struct KeptTerm {
  double sign;
  const char* pols;
  const char* path_a;
  const char* path_b;
};

// Measured term: sign, the two measured paths, and their time bins.
struct MeasKet {
  double sign;
  const char* p1;
  const char* p2;
  int t1 = 0;
  int t2 = 0;
};

}  // namespace

State front_end_balanced_expected() {
  State s;
  for (char p1 : {'H', 'V'}) {
    for (char p2 : {'H', 'V'}) {
      for (int i : {0, 1}) {
        const char* a_path = i == 0 ? kA1 : kA2;
        const std::vector<std::pair<const char*, double>> b_ports{
            {i == 0 ? kB1 : kB2, +1.0}, {i == 0 ? kA1p : kA2p, +1.0}};
        for (const auto& [b_port, b_sign] : b_ports) {
          for (int j : {0, 1}) {
            const char* bp_path = j == 0 ? kB1p : kB2p;
            const std::vector<std::pair<const char*, double>> a_ports{
                {j == 0 ? kB1 : kB2, +1.0}, {j == 0 ? kA1p : kA2p, -1.0}};
            for (const auto& [a_port, a_sign] : a_ports) {
              s.add(0.125 * b_sign * a_sign,
                    Monomial({Mode{a_path, pol_of(p1), 0}, Mode{b_port, pol_of(p1), 0},
                              Mode{a_port, pol_of(p2), 0}, Mode{bp_path, pol_of(p2), 0}}));
            }
          }
        }
      }
    }
  }
  return s.pruned();
}

State front_end_expected(const SourceParams& p) {
  p.validate();
  State s;
  const std::vector<std::pair<cplx, char>> pol_terms{{p.alpha, 'H'}, {p.beta, 'V'}};
  for (const auto& [c1, p1] : pol_terms) {
    for (const auto& [c2, p2] : pol_terms) {
      for (int i : {0, 1}) {
        const cplx g1 = i == 0 ? p.gamma : p.delta;
        const char* a_path = i == 0 ? kA1 : kA2;
        const std::vector<std::pair<const char*, double>> b_ports{
            {i == 0 ? kB1 : kB2, +1.0}, {i == 0 ? kA1p : kA2p, +1.0}};
        for (const auto& [b_port, b_sign] : b_ports) {
          for (int j : {0, 1}) {
            const cplx g2 = j == 0 ? p.gamma : p.delta;
            const char* bp_path = j == 0 ? kB1p : kB2p;
            const std::vector<std::pair<const char*, double>> a_ports{
                {j == 0 ? kB1 : kB2, +1.0}, {j == 0 ? kA1p : kA2p, -1.0}};
            for (const auto& [a_port, a_sign] : a_ports) {
              s.add(0.5 * c1 * c2 * g1 * g2 * b_sign * a_sign,
                    Monomial({Mode{a_path, pol_of(p1), 0}, Mode{b_port, pol_of(p1), 0},
                              Mode{a_port, pol_of(p2), 0}, Mode{bp_path, pol_of(p2), 0}}));
            }
          }
        }
      }
    }
  }
  return s.pruned();
}

State post_flip_expected(const SourceParams& p) {
  p.validate();
  State s;
  const cplx a2 = p.alpha * p.alpha;
  const cplx b2 = p.beta * p.beta;
  const cplx ab = p.alpha * p.beta;
  const cplx g2 = p.gamma * p.gamma;
  const cplx d2 = p.delta * p.delta;
  const cplx gd = p.gamma * p.delta;
  const double r2 = 1.0 / std::sqrt(2.0);

  // Polarization pattern slots: kept A, kept B', measured pair.
  auto emit = [&](cplx c, const char* pol4, const char* ka, const char* kb,
                  const std::vector<MeasKet>& meas) {
    for (const MeasKet& mk : meas)
      add_ket(s, c * mk.sign, pol4, {ka, kb, mk.p1, mk.p2});
  };

  const std::vector<MeasKet> pair1{{+1, kB1, kB1}, {-1, kA1p, kA1p}};
  const std::vector<MeasKet> pair2{{+1, kB2, kB2}, {-1, kA2p, kA2p}};
  const std::vector<MeasKet> quad1{
      {+1, kB1, kB1}, {-1, kA1p, kA1p}, {-1, kB1, kA1p}, {+1, kA1p, kB1}};
  const std::vector<MeasKet> quad2{
      {+1, kB2, kB2}, {-1, kA2p, kA2p}, {-1, kB2, kA2p}, {+1, kA2p, kB2}};
  const std::vector<MeasKet> cross1{
      {+1, kB1, kB2}, {-1, kA1p, kA2p}, {-1, kB1, kA2p}, {+1, kA1p, kB2}};
  const std::vector<MeasKet> cross2{
      {+1, kB2, kB1}, {-1, kA2p, kA1p}, {-1, kB2, kA1p}, {+1, kA2p, kB1}};

  emit(r2 * a2 * g2, "HVHH", kA1, kB2p, pair1);
  emit(r2 * a2 * d2, "HVHH", kA2, kB1p, pair2);
  emit(r2 * b2 * g2, "VHVV", kA1, kB2p, pair1);
  emit(r2 * b2 * d2, "VHVV", kA2, kB1p, pair2);

  emit(0.5 * ab * g2, "HHHV", kA1, kB2p, quad1);
  emit(0.5 * ab * d2, "HHHV", kA2, kB1p, quad2);
  emit(0.5 * ab * g2, "VVVH", kA1, kB2p, quad1);
  emit(0.5 * ab * d2, "VVVH", kA2, kB1p, quad2);

  for (const auto& [pc, pol4] : std::vector<std::pair<cplx, const char*>>{
           {a2, "HVHH"}, {b2, "VHVV"}, {ab, "HHHV"}, {ab, "VVVH"}}) {
    emit(0.5 * gd * pc, pol4, kA1, kB1p, cross1);
    emit(0.5 * gd * pc, pol4, kA2, kB2p, cross2);
  }
  return s.pruned();
}

State post_delay_component(int k, const SourceParams& p) {
  p.validate();
  State s;
  const cplx a2 = p.alpha * p.alpha;
  const cplx b2 = p.beta * p.beta;
  const cplx g2 = p.gamma * p.gamma;
  const cplx d2 = p.delta * p.delta;
  const double r2 = 1.0 / std::sqrt(2.0);

  // One bracket group: (sum of signed kept terms) x (sum of signed measured
  // kets), measured polarization pattern shared across the group.
  auto group = [&](cplx c, const std::vector<KeptTerm>& kept, const char* mp,
                   const std::vector<MeasKet>& meas) {
    for (const KeptTerm& kt : kept)
      for (const MeasKet& mk : meas)
        add_ket(s, c * kt.sign * mk.sign, std::string(kt.pols) + mp,
                {kt.path_a, kt.path_b, mk.p1, mk.p2}, {0, 0, mk.t1, mk.t2});
  };

  switch (k) {
    case 0: {
      const cplx f = p.alpha * p.beta / 2.0;
      group(f * g2, {{+1, "HH", kA1, kB2p}, {+1, "VV", kA1, kB2p}}, "HV",
            {{+1, kB1, kB1, 3, 4}, {-1, kA1p, kA1p, 1, 2}});
      group(f * d2, {{+1, "HH", kA2, kB1p}, {+1, "VV", kA2, kB1p}}, "HV",
            {{+1, kB2, kB2, 2, 1}, {-1, kA2p, kA2p, 4, 3}});
      group(f * g2, {{+1, "HH", kA1, kB2p}, {-1, "VV", kA1, kB2p}}, "HV",
            {{+1, kA1p, kB1, 1, 4}, {-1, kB1, kA1p, 3, 2}});
      group(f * d2, {{+1, "HH", kA2, kB1p}, {-1, "VV", kA2, kB1p}}, "HV",
            {{+1, kA2p, kB2, 4, 1}, {-1, kB2, kA2p, 2, 3}});
      break;
    }
    case 1: {
      const cplx f = p.gamma * p.delta / 2.0;
      group(f * a2, {{+1, "HV", kA1, kB1p}, {+1, "HV", kA2, kB2p}}, "HH",
            {{+1, kB1, kB2, 3, 2}, {-1, kA1p, kA2p, 1, 4}});
      group(f * a2, {{+1, "HV", kA1, kB1p}, {-1, "HV", kA2, kB2p}}, "HH",
            {{+1, kA1p, kB2, 1, 2}, {-1, kB1, kA2p, 3, 4}});
      group(f * b2, {{+1, "VH", kA1, kB1p}, {+1, "VH", kA2, kB2p}}, "VV",
            {{+1, kB1, kB2, 4, 1}, {-1, kA1p, kA2p, 2, 3}});
      group(f * b2, {{+1, "VH", kA1, kB1p}, {-1, "VH", kA2, kB2p}}, "VV",
            {{+1, kA1p, kB2, 2, 1}, {-1, kB1, kA2p, 4, 3}});
      break;
    }
    case 2: {
      const cplx f = p.alpha * p.beta * p.gamma * p.delta / 2.0;
      group(f, {{+1, "HH", kA1, kB1p}, {+1, "VV", kA2, kB2p}}, "HV",
            {{+1, kB1, kB2, 3, 1}, {-1, kA1p, kA2p, 1, 3}});
      group(f, {{+1, "HH", kA2, kB2p}, {+1, "VV", kA1, kB1p}}, "VH",
            {{+1, kB1, kB2, 4, 2}, {-1, kA1p, kA2p, 2, 4}});
      group(f, {{+1, "HH", kA1, kB1p}, {-1, "VV", kA2, kB2p}}, "HV",
            {{+1, kA1p, kB2, 1, 1}, {-1, kB1, kA2p, 3, 3}});
      group(f, {{+1, "HH", kA2, kB2p}, {-1, "VV", kA1, kB1p}}, "HV",
            {{+1, kA2p, kB1, 4, 4}, {-1, kB2, kA1p, 2, 2}});
      break;
    }
    case 3: {
      group(r2 * a2 * g2, {{+1, "HV", kA1, kB2p}}, "HH",
            {{+1, kB1, kB1, 3, 3}, {-1, kA1p, kA1p, 1, 1}});
      group(r2 * b2 * g2, {{+1, "VH", kA1, kB2p}}, "VV",
            {{+1, kB1, kB1, 4, 4}, {-1, kA1p, kA1p, 2, 2}});
      group(r2 * a2 * d2, {{+1, "HV", kA2, kB1p}}, "HH",
            {{+1, kB2, kB2, 2, 2}, {-1, kA2p, kA2p, 4, 4}});
      group(r2 * b2 * d2, {{+1, "VH", kA2, kB1p}}, "VV",
            {{+1, kB2, kB2, 1, 1}, {-1, kA2p, kA2p, 3, 3}});
      break;
    }
    default:
      throw std::invalid_argument("component index must be 0..3");
  }
  return s.pruned();
}

State ghz_front_end_expected(const SourceParams& p) {
  p.validate();
  State s;
  const cplx a2 = p.alpha * p.alpha;
  const cplx b2 = p.beta * p.beta;
  const cplx ab = p.alpha * p.beta;
  const cplx g2 = p.gamma * p.gamma;
  const cplx d2 = p.delta * p.delta;
  const cplx gd = p.gamma * p.delta;
  const double r2 = 1.0 / std::sqrt(2.0);

  // Polarization slots: kept A, kept B', measured pair, kept C, kept C'.
  auto emit = [&](cplx c, const char* pol6, const char* ka, const char* kb, const char* kc,
                  const char* kcp, const std::vector<MeasKet>& meas) {
    for (const MeasKet& mk : meas)
      add_ket(s, c * mk.sign, pol6, {ka, kb, mk.p1, mk.p2, kc, kcp});
  };

  const std::vector<MeasKet> pair1{{+1, kB1, kB1}, {-1, kA1p, kA1p}};
  const std::vector<MeasKet> pair2{{+1, kB2, kB2}, {-1, kA2p, kA2p}};
  const std::vector<MeasKet> quad1{
      {+1, kB1, kB1}, {-1, kA1p, kA1p}, {-1, kB1, kA1p}, {+1, kA1p, kB1}};
  const std::vector<MeasKet> quad2{
      {+1, kB2, kB2}, {-1, kA2p, kA2p}, {-1, kB2, kA2p}, {+1, kA2p, kB2}};
  const std::vector<MeasKet> cross1{
      {+1, kB1, kB2}, {-1, kA1p, kA2p}, {-1, kB1, kA2p}, {+1, kA1p, kB2}};
  const std::vector<MeasKet> cross2{
      {+1, kB2, kB1}, {-1, kA2p, kA1p}, {-1, kB2, kA1p}, {+1, kA2p, kB1}};

  emit(r2 * a2 * g2, "HHHHHH", kA1, kB1p, kC1, kC1p, pair1);
  emit(r2 * a2 * d2, "HHHHHH", kA2, kB2p, kC2, kC2p, pair2);
  emit(r2 * b2 * g2, "VVVVVV", kA1, kB1p, kC1, kC1p, pair1);
  emit(r2 * b2 * d2, "VVVVVV", kA2, kB2p, kC2, kC2p, pair2);

  emit(0.5 * ab * g2, "HVHVHV", kA1, kB1p, kC1, kC1p, quad1);
  emit(0.5 * ab * d2, "HVHVHV", kA2, kB2p, kC2, kC2p, quad2);
  emit(0.5 * ab * g2, "VHVHVH", kA1, kB1p, kC1, kC1p, quad1);
  emit(0.5 * ab * d2, "VHVHVH", kA2, kB2p, kC2, kC2p, quad2);

  for (const auto& [pc, pol6] : std::vector<std::pair<cplx, const char*>>{
           {a2, "HHHHHH"}, {b2, "VVVVVV"}, {ab, "HVHVHV"}, {ab, "VHVHVH"}}) {
    emit(0.5 * gd * pc, pol6, kA1, kB2p, kC1, kC2p, cross1);
    emit(0.5 * gd * pc, pol6, kA2, kB1p, kC2, kC1p, cross2);
  }
  return s.pruned();
}

}  // namespace hyperecp::equations
