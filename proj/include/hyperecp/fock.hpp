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

#include <complex>
#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace hyperecp::fock {

using cplx = std::complex<double>;

namespace tol {
// Amplitudes at or below this are discarded after every rewriting operation.
inline constexpr double amplitude = 1e-12;
// Maximum Gram deviation accepted when a mode map claims to be unitary.
inline constexpr double unitarity = 1e-12;
// Probabilities and aggregates compare at this tolerance.
inline constexpr double probability = 1e-9;
// A collapsed state matches a reference when fidelity reaches 1 - this.
inline constexpr double fidelity_match = 1e-9;
}  // namespace tol

enum class Pol : std::uint8_t { H = 0, V = 1 };

const char* pol_name(Pol p);

// One bosonic mode: spatial path label, polarization, integer time bin in
// units of the base delay; tbin 0 is the undelayed reference arrival.
struct Mode {
  std::string path;
  Pol pol = Pol::H;
  int tbin = 0;

  auto operator<=>(const Mode&) const = default;
  std::string str() const;
};

// (path, polarization) with the time bin left open. Optical elements act
// uniformly in time, so rails are the natural keys for mode maps and for
// detector assignments.
struct Rail {
  std::string path;
  Pol pol = Pol::H;

  auto operator<=>(const Rail&) const = default;
  std::string str() const;
};

inline Rail rail_of(const Mode& m) { return Rail{m.path, m.pol}; }

// Sorted multiset of modes; a repeated entry means several photons share one
// mode. Stands for the corresponding creation-operator product acting on
// vacuum, whose squared norm is factorial_weight().
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::vector<Mode> modes);

  const std::vector<Mode>& modes() const { return modes_; }
  int photon_count() const { return static_cast<int>(modes_.size()); }
  double factorial_weight() const;
  bool touches_path(const std::string& path) const;

  auto operator<=>(const Monomial&) const = default;
  std::string str() const;

 private:
  std::vector<Mode> modes_;
};

// Sparse superposition: canonical monomial -> complex amplitude, amplitudes
// in the bare creation-operator convention (the bosonic factorials live in
// the inner product, not in the stored numbers).
class State {
 public:
  State() = default;

  static State term(cplx amp, std::vector<Mode> modes);

  void add(cplx amp, Monomial m);

  const std::map<Monomial, cplx>& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  double squared_norm() const;
  State pruned(double eps = tol::amplitude) const;
  State normalized() const;

  // Uniform photon count across monomials; throws if the state mixes counts.
  int photon_count() const;
  std::set<std::string> paths() const;

  State& operator+=(const State& o);
  State& operator-=(const State& o);
  State& operator*=(cplx c);
  friend State operator+(State a, const State& b) { return a += b; }
  friend State operator-(State a, const State& b) { return a -= b; }
  friend State operator*(cplx c, State s) { return s *= c; }

  std::string str() const;

 private:
  std::map<Monomial, cplx> terms_;
};

cplx inner_product(const State& a, const State& b);

// |<a|b>|^2 / (<a|a><b|b>); rejects (near-)zero operands.
double fidelity(const State& a, const State& b);

// Product state; operands must live on disjoint path sets.
State tensor(const State& a, const State& b);

// Time-covariant linear substitution on creation operators. A mapped rail is
// rewritten as a sum of target rails with time-bin shifts; rails absent from
// the table act as identity.
class ModeMap {
 public:
  struct Entry {
    Rail target;
    int tbin_shift = 0;
    cplx coeff;
  };

  // Replaces the image of `source`; the image must be non-empty.
  void set(const Rail& source, std::vector<Entry> image);

  const std::map<Rail, std::vector<Entry>>& table() const { return table_; }
  bool maps(const Rail& r) const { return table_.count(r) != 0; }
  std::set<Rail> source_rails() const;
  std::set<Rail> image_rails() const;
  int max_shift() const;
  int min_shift() const;

  // Adjoint substitution; the inverse map of a unitary table.
  ModeMap inverse() const;

 private:
  std::map<Rail, std::vector<Entry>> table_;
};

struct IsometryReport {
  bool pass = false;
  double max_deviation = 0.0;
  std::string detail;
};

// Exact Gram check of the induced matrix, valid over every finite time
// window at once; on failure the detail names the offending singular value.
IsometryReport check_isometry(const ModeMap& m);

// Applies the substitution to every monomial. Throws if the map fails the
// isometry check, if a photon occupies an unmapped rail inside the image
// (the substitution would not preserve norms), or if a shift would produce a
// negative time bin.
State apply_mode_map(const State& s, const ModeMap& m);

}  // namespace hyperecp::fock
