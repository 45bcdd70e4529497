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

// Test-local helpers: seeded random states/maps and brute-force oracles that
// recompute quantities the library derives by other means.

#include <Eigen/Dense>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "hyperecp/fock.hpp"

namespace testsupport {

using hyperecp::fock::cplx;
using hyperecp::fock::Mode;
using hyperecp::fock::ModeMap;
using hyperecp::fock::Monomial;
using hyperecp::fock::Pol;
using hyperecp::fock::Rail;
using hyperecp::fock::State;

// Overlap of a creation monomial with itself, counted as the number of
// photon permutations that fix the mode assignment. Independent of the
// factorial formula used by the library.
inline double brute_force_self_overlap(const Monomial& m) {
  const auto& modes = m.modes();
  const int n = m.photon_count();
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  double count = 0.0;
  do {
    bool fixes = true;
    for (int i = 0; i < n && fixes; ++i) fixes = modes[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])] == modes[static_cast<std::size_t>(i)];
    if (fixes) count += 1.0;
  } while (std::next_permutation(idx.begin(), idx.end()));
  return count;
}

inline double brute_force_squared_norm(const State& s) {
  double n = 0.0;
  for (const auto& [m, a] : s.terms()) n += std::norm(a) * brute_force_self_overlap(m);
  return n;
}

inline cplx random_cplx(std::mt19937_64& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  return {d(rng), d(rng)};
}

// Random superposition with `terms` monomials of `photons` photons each,
// drawn from the given rails and time bins {0, 1, 2}.
inline State random_state(std::mt19937_64& rng, const std::vector<Rail>& rails, int photons,
                          int terms) {
  std::uniform_int_distribution<std::size_t> pick_rail(0, rails.size() - 1);
  std::uniform_int_distribution<int> pick_tbin(0, 2);
  State s;
  for (int t = 0; t < terms; ++t) {
    std::vector<Mode> modes;
    for (int p = 0; p < photons; ++p) {
      const Rail& r = rails[pick_rail(rng)];
      modes.push_back(Mode{r.path, r.pol, pick_tbin(rng)});
    }
    s.add(random_cplx(rng), Monomial(std::move(modes)));
  }
  return s;
}

// Haar-ish unitary over the given rails (zero time shifts) via QR of a
// random complex matrix.
inline ModeMap random_unitary_map(std::mt19937_64& rng, const std::vector<Rail>& rails) {
  const auto n = static_cast<Eigen::Index>(rails.size());
  Eigen::MatrixXcd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = random_cplx(rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  Eigen::MatrixXcd q = qr.householderQ();

  ModeMap m;
  for (Eigen::Index j = 0; j < n; ++j) {
    std::vector<ModeMap::Entry> image;
    for (Eigen::Index i = 0; i < n; ++i)
      image.push_back({rails[static_cast<std::size_t>(i)], 0, q(i, j)});
    m.set(rails[static_cast<std::size_t>(j)], std::move(image));
  }
  return m;
}

}  // namespace testsupport
