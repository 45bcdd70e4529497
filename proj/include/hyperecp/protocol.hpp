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

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hyperecp/optics.hpp"

namespace hyperecp::protocol {

using fock::cplx;
using fock::Mode;
using fock::Pol;
using fock::Rail;
using fock::State;

// Pair/triple sources are (alpha|HH..> + beta|VV..>) x (gamma|first paths> +
// delta|second paths>), normalized in each degree of freedom separately.
struct SourceParams {
  cplx alpha;
  cplx beta;
  cplx gamma;
  cplx delta;

  // alpha = sqrt(alpha2) e^{i arg_alpha}, beta = sqrt(1 - alpha2); same for
  // gamma/delta. Requires alpha2, gamma2 in (0, 1).
  static SourceParams from_intensities(double alpha2, double gamma2, double arg_alpha = 0.0,
                                       double arg_gamma = 0.0);

  // Enforces both normalization conditions within 1e-12.
  void validate() const;
};

// One concentration round maps source coefficients x -> x^2 / sqrt(|x|^4 + |y|^4).
SourceParams recycled_params(const SourceParams& p);

// Spatial rails of each photon; photon 1 of the pair rides the `a` paths.
struct BellLabels {
  std::array<std::string, 2> photon_a;
  std::array<std::string, 2> photon_b;
};
struct GhzLabels {
  std::array<std::string, 2> photon_a;
  std::array<std::string, 2> photon_b;
  std::array<std::string, 2> photon_c;
};

BellLabels bell_ab();
BellLabels bell_ab_prime();
GhzLabels ghz_abc();
GhzLabels ghz_abc_prime();

State make_bell_source(const SourceParams& p, const BellLabels& labels);
State make_ghz_source(const SourceParams& p, const GhzLabels& labels);

// Two-pair (two-triple) input of the concentration run.
State bell_input(const SourceParams& p);
State ghz_input(const SourceParams& p);

// Circuit stages, in application order.
optics::Circuit bell_front_end();        // couplers joining B with A'
optics::Circuit bell_bprime_flip();      // polarization + path flip of photon B'
optics::Circuit bell_delay_stage();      // per-rail delays on the measured photons
optics::Circuit bell_hadamard_stage();   // path and polarization Hadamards
optics::Circuit build_bell_circuit();

optics::Circuit charlie_stage();         // diagonal-basis analysis of photon C'
optics::Circuit build_ghz_circuit();

// Conditional corrections on photon B': Z^S flips the sign of the second
// spatial rail, Z^P flips the sign of V. Both are involutions.
struct FeedForward {
  bool zs = false;
  bool zp = false;

  bool operator==(const FeedForward&) const = default;
  std::string str() const;  // "none", "Z^S", "Z^P", "Z^S,Z^P"
};

State feed_forward(const State& s, const FeedForward& f);

// Polarization swap plus path swap on photon B'.
State flip_Bprime(const State& s);

// Families of two- and three-photon target states. The two sign slots read
// (polarization, spatial); a minus in a slot is corrected by Z^P / Z^S.
enum class RefClass { Phi0, Phi1, Phi2, Psi0, Psi1, BellMax, GhzMax };

struct ReferenceFamily {
  RefClass cls = RefClass::Phi0;
  int pol_sign = +1;
  int spa_sign = +1;

  auto operator<=>(const ReferenceFamily&) const = default;
  std::string name() const;  // e.g. "phi0^{+-}"
  FeedForward correction() const;
};

// Normalized target state. Phi1/Phi2/Psi1 carry the recycled coefficients
// and therefore need the source parameters.
State reference_state(const ReferenceFamily& r,
                      const std::optional<SourceParams>& params = std::nullopt);

// The families a run's non-fail outcomes collapse to.
std::vector<ReferenceFamily> bell_outcome_families();
std::vector<ReferenceFamily> ghz_outcome_families();

}  // namespace hyperecp::protocol
