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

#include "hyperecp/protocol.hpp"

#include <cmath>
#include <stdexcept>

namespace hyperecp::protocol {

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

Pol pol_of(char c) {
  if (c == 'H') return Pol::H;
  if (c == 'V') return Pol::V;
  throw std::invalid_argument("polarization character must be H or V");
}

// Product of a polarization pattern sum and a path pattern sum, one photon
// per slot, all photons in time bin 0. Every pattern uses distinct paths, so
// stored amplitudes need no occupation-number reweighting.
State pattern_product(const std::vector<std::pair<cplx, std::string>>& pol_terms,
                      const std::vector<std::pair<cplx, std::vector<std::string>>>& path_terms) {
  State s;
  for (const auto& [pc, pols] : pol_terms) {
    for (const auto& [qc, paths] : path_terms) {
      if (pols.size() != paths.size())
        throw std::invalid_argument("pattern arity mismatch");
      std::vector<Mode> modes;
      modes.reserve(paths.size());
      for (std::size_t i = 0; i < paths.size(); ++i)
        modes.push_back(Mode{paths[i], pol_of(pols[i]), 0});
      s.add(pc * qc, fock::Monomial(modes));
    }
  }
  return s;
}

}  // namespace

SourceParams SourceParams::from_intensities(double alpha2, double gamma2, double arg_alpha,
                                            double arg_gamma) {
  if (!(alpha2 > 0.0 && alpha2 < 1.0))
    throw std::invalid_argument("alpha2 must lie in (0, 1)");
  if (!(gamma2 > 0.0 && gamma2 < 1.0))
    throw std::invalid_argument("gamma2 must lie in (0, 1)");
  SourceParams p;
  p.alpha = std::polar(std::sqrt(alpha2), arg_alpha);
  p.beta = std::sqrt(1.0 - alpha2);
  p.gamma = std::polar(std::sqrt(gamma2), arg_gamma);
  p.delta = std::sqrt(1.0 - gamma2);
  return p;
}

void SourceParams::validate() const {
  const double np = std::norm(alpha) + std::norm(beta);
  const double ns = std::norm(gamma) + std::norm(delta);
  if (std::abs(np - 1.0) > 1e-12 || std::abs(ns - 1.0) > 1e-12)
    throw std::invalid_argument("source coefficients are not normalized");
  if (std::norm(alpha) == 0.0 || std::norm(beta) == 0.0 || std::norm(gamma) == 0.0 ||
      std::norm(delta) == 0.0)
    throw std::invalid_argument("source coefficients must all be nonzero");
}

SourceParams recycled_params(const SourceParams& p) {
  p.validate();
  const double dp = std::sqrt(std::norm(p.alpha) * std::norm(p.alpha) +
                              std::norm(p.beta) * std::norm(p.beta));
  const double ds = std::sqrt(std::norm(p.gamma) * std::norm(p.gamma) +
                              std::norm(p.delta) * std::norm(p.delta));
  SourceParams r;
  r.alpha = p.alpha * p.alpha / dp;
  r.beta = p.beta * p.beta / dp;
  r.gamma = p.gamma * p.gamma / ds;
  r.delta = p.delta * p.delta / ds;
  return r;
}

BellLabels bell_ab() { return {{kA1, kA2}, {kB1, kB2}}; }
BellLabels bell_ab_prime() { return {{kA1p, kA2p}, {kB1p, kB2p}}; }
GhzLabels ghz_abc() { return {{kA1, kA2}, {kB1, kB2}, {kC1, kC2}}; }
GhzLabels ghz_abc_prime() { return {{kA1p, kA2p}, {kB1p, kB2p}, {kC1p, kC2p}}; }

State make_bell_source(const SourceParams& p, const BellLabels& L) {
  p.validate();
  return pattern_product({{p.alpha, "HH"}, {p.beta, "VV"}},
                         {{p.gamma, {L.photon_a[0], L.photon_b[0]}},
                          {p.delta, {L.photon_a[1], L.photon_b[1]}}});
}

State make_ghz_source(const SourceParams& p, const GhzLabels& L) {
  p.validate();
  return pattern_product(
      {{p.alpha, "HHH"}, {p.beta, "VVV"}},
      {{p.gamma, {L.photon_a[0], L.photon_b[0], L.photon_c[0]}},
       {p.delta, {L.photon_a[1], L.photon_b[1], L.photon_c[1]}}});
}

State bell_input(const SourceParams& p) {
  return fock::tensor(make_bell_source(p, bell_ab()), make_bell_source(p, bell_ab_prime()));
}

State ghz_input(const SourceParams& p) {
  return fock::tensor(make_ghz_source(p, ghz_abc()), make_ghz_source(p, ghz_abc_prime()));
}

optics::Circuit bell_front_end() {
  optics::Circuit c;
  c.elements.push_back(optics::BeamSplitter{kB1, kA1p});
  c.elements.push_back(optics::BeamSplitter{kB2, kA2p});
  return c;
}

optics::Circuit bell_bprime_flip() {
  optics::Circuit c;
  c.elements.push_back(optics::HalfWavePlate{kB1p, 45.0});
  c.elements.push_back(optics::HalfWavePlate{kB2p, 45.0});
  c.elements.push_back(optics::PathSwap{kB1p, kB2p});
  return c;
}

optics::Circuit bell_delay_stage() {
  optics::Circuit c;
  c.elements.push_back(optics::ConditionalDelay{{{Rail{kA1p, Pol::H}, 1},
                                                 {Rail{kA1p, Pol::V}, 2},
                                                 {Rail{kA2p, Pol::V}, 3},
                                                 {Rail{kA2p, Pol::H}, 4}}});
  c.elements.push_back(optics::ConditionalDelay{{{Rail{kB2, Pol::V}, 1},
                                                 {Rail{kB2, Pol::H}, 2},
                                                 {Rail{kB1, Pol::H}, 3},
                                                 {Rail{kB1, Pol::V}, 4}}});
  return c;
}

optics::Circuit bell_hadamard_stage() {
  optics::Circuit c;
  c.elements.push_back(optics::BeamSplitter{kB1, kB2});
  c.elements.push_back(optics::BeamSplitter{kA1p, kA2p});
  c.elements.push_back(optics::HalfWavePlate{kB1, 22.5});
  c.elements.push_back(optics::HalfWavePlate{kB2, 22.5});
  c.elements.push_back(optics::HalfWavePlate{kA1p, 22.5});
  c.elements.push_back(optics::HalfWavePlate{kA2p, 22.5});
  return c;
}

optics::Circuit build_bell_circuit() {
  optics::Circuit c;
  for (const auto& stage :
       {bell_front_end(), bell_bprime_flip(), bell_delay_stage(), bell_hadamard_stage()})
    c.elements.insert(c.elements.end(), stage.elements.begin(), stage.elements.end());
  return c;
}

optics::Circuit charlie_stage() {
  optics::Circuit c;
  c.elements.push_back(optics::BeamSplitter{kC1p, kC2p});
  c.elements.push_back(optics::HalfWavePlate{kC1p, 22.5});
  c.elements.push_back(optics::HalfWavePlate{kC2p, 22.5});
  return c;
}

optics::Circuit build_ghz_circuit() {
  optics::Circuit c = build_bell_circuit();
  const optics::Circuit cs = charlie_stage();
  c.elements.insert(c.elements.end(), cs.elements.begin(), cs.elements.end());
  return c;
}

std::string FeedForward::str() const {
  if (zs && zp) return "Z^S,Z^P";
  if (zs) return "Z^S";
  if (zp) return "Z^P";
  return "none";
}

State feed_forward(const State& s, const FeedForward& f) {
  optics::Circuit c;
  if (f.zs) c.elements.push_back(optics::PhaseShifter{kB2p});
  if (f.zp) {
    c.elements.push_back(optics::HalfWavePlate{kB1p, 0.0});
    c.elements.push_back(optics::HalfWavePlate{kB2p, 0.0});
  }
  return optics::apply_circuit(s, c);
}

State flip_Bprime(const State& s) { return optics::apply_circuit(s, bell_bprime_flip()); }

std::string ReferenceFamily::name() const {
  auto signed_name = [&](const char* base) {
    std::string n(base);
    n += "^{";
    n += pol_sign >= 0 ? '+' : '-';
    n += spa_sign >= 0 ? '+' : '-';
    n += '}';
    return n;
  };
  switch (cls) {
    case RefClass::Phi0: return signed_name("phi0");
    case RefClass::Phi1: return signed_name("phi1");
    case RefClass::Phi2: return "phi2";
    case RefClass::Psi0: return signed_name("psi0");
    case RefClass::Psi1: return signed_name("psi1");
    case RefClass::BellMax: return "bell_max";
    case RefClass::GhzMax: return "ghz_max";
  }
  throw std::runtime_error("unknown reference class");
}

FeedForward ReferenceFamily::correction() const {
  return FeedForward{spa_sign < 0, pol_sign < 0};
}

State reference_state(const ReferenceFamily& r, const std::optional<SourceParams>& params) {
  const double sp = r.pol_sign >= 0 ? 1.0 : -1.0;
  const double ss = r.spa_sign >= 0 ? 1.0 : -1.0;
  auto recycled = [&]() -> SourceParams {
    if (!params)
      throw std::invalid_argument("this reference family needs source parameters");
    return recycled_params(*params);
  };
  switch (r.cls) {
    case RefClass::Phi0:
      return pattern_product({{0.5, "HH"}, {0.5 * sp, "VV"}},
                             {{1.0, {kA1, kB1p}}, {ss, {kA2, kB2p}}});
    case RefClass::Phi1: {
      const SourceParams q = recycled();
      return pattern_product({{q.alpha, "HV"}, {sp * q.beta, "VH"}},
                             {{q.gamma, {kA1, kB2p}}, {ss * q.delta, {kA2, kB1p}}});
    }
    case RefClass::Phi2: {
      const SourceParams q = recycled();
      return pattern_product({{q.alpha, "HH"}, {q.beta, "VV"}},
                             {{q.gamma, {kA1, kB1p}}, {q.delta, {kA2, kB2p}}});
    }
    case RefClass::Psi0:
      return pattern_product({{0.5, "HHH"}, {0.5 * sp, "VVV"}},
                             {{1.0, {kA1, kB1p, kC1}}, {ss, {kA2, kB2p, kC2}}});
    case RefClass::Psi1: {
      const SourceParams q = recycled();
      return pattern_product({{q.alpha, "HVH"}, {sp * q.beta, "VHV"}},
                             {{q.gamma, {kA1, kB2p, kC1}}, {ss * q.delta, {kA2, kB1p, kC2}}});
    }
    case RefClass::BellMax:
      return pattern_product({{0.5, "HH"}, {0.5, "VV"}}, {{1.0, {kA1, kB1}}, {1.0, {kA2, kB2}}});
    case RefClass::GhzMax:
      return pattern_product({{0.5, "HHH"}, {0.5, "VVV"}},
                             {{1.0, {kA1, kB1, kC1}}, {1.0, {kA2, kB2, kC2}}});
  }
  throw std::runtime_error("unknown reference class");
}

std::vector<ReferenceFamily> bell_outcome_families() {
  std::vector<ReferenceFamily> v;
  for (RefClass c : {RefClass::Phi0, RefClass::Phi1})
    for (int sp : {+1, -1})
      for (int ss : {+1, -1}) v.push_back({c, sp, ss});
  return v;
}

std::vector<ReferenceFamily> ghz_outcome_families() {
  std::vector<ReferenceFamily> v;
  for (RefClass c : {RefClass::Psi0, RefClass::Psi1})
    for (int sp : {+1, -1})
      for (int ss : {+1, -1}) v.push_back({c, sp, ss});
  return v;
}

}  // namespace hyperecp::protocol
