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

#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "hyperecp/fock.hpp"
#include "support.hpp"

using namespace hyperecp::fock;
using testsupport::brute_force_squared_norm;
using testsupport::random_state;
using testsupport::random_unitary_map;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Mode xH(int t = 0) { return Mode{"x", Pol::H, t}; }
Mode yH(int t = 0) { return Mode{"y", Pol::H, t}; }
Mode xV(int t = 0) { return Mode{"x", Pol::V, t}; }

// 50:50 coupler on the H rails of paths x and y, first-listed port keeps the
// plus sign.
ModeMap coupler_xy() {
  ModeMap m;
  m.set(Rail{"x", Pol::H}, {{Rail{"x", Pol::H}, 0, kInvSqrt2}, {Rail{"y", Pol::H}, 0, kInvSqrt2}});
  m.set(Rail{"y", Pol::H}, {{Rail{"x", Pol::H}, 0, kInvSqrt2}, {Rail{"y", Pol::H}, 0, -kInvSqrt2}});
  return m;
}

}  // namespace

TEST_SUITE("fock") {

TEST_CASE("monomials canonicalize mode order") {
  Monomial a({yH(1), xH(0), xV(2)});
  Monomial b({xV(2), yH(1), xH(0)});
  CHECK(a == b);
  CHECK(a.modes().front() == xH(0));
}

TEST_CASE("monomials reject malformed modes") {
  CHECK_THROWS_AS(Monomial({Mode{"x", Pol::H, -1}}), std::invalid_argument);
  CHECK_THROWS_AS(Monomial({Mode{"", Pol::H, 0}}), std::invalid_argument);
}

TEST_CASE("factorial weight counts photon permutations") {
  CHECK(Monomial({xH()}).factorial_weight() == 1.0);
  CHECK(Monomial({xH(), xH()}).factorial_weight() == 2.0);
  CHECK(Monomial({xH(), xH(), xH()}).factorial_weight() == 6.0);
  Monomial mixed({xH(), xH(), xH(), yH(), yH(), xV(1)});
  CHECK(mixed.factorial_weight() == 12.0);
  CHECK(mixed.factorial_weight() == testsupport::brute_force_self_overlap(mixed));
}

TEST_CASE("state addition merges and cancels terms") {
  State s = State::term(0.5, {xH()});
  s += State::term(0.5, {xH()});
  CHECK(s.term_count() == 1);
  CHECK(s.terms().begin()->second == cplx{1.0, 0.0});
  s -= State::term(1.0, {xH()});
  CHECK(s.empty());
}

TEST_CASE("squared norm matches the permutation-counting oracle") {
  std::mt19937_64 rng(20260815);
  const std::vector<Rail> rails = {{"x", Pol::H}, {"x", Pol::V}, {"y", Pol::H}};
  for (int trial = 0; trial < 25; ++trial) {
    const int photons = 1 + trial % 4;
    State s = random_state(rng, rails, photons, 5);
    CHECK(s.squared_norm() == doctest::Approx(brute_force_squared_norm(s)).epsilon(1e-12));
  }
}

TEST_CASE("inner product carries bosonic weights") {
  State two = State::term(1.0, {xH(), xH()});
  CHECK(inner_product(two, two).real() == doctest::Approx(2.0));
  State one = State::term(1.0, {xH()});
  CHECK(inner_product(one, two) == cplx{0.0, 0.0});
}

TEST_CASE("fidelity is phase invariant and detects orthogonality") {
  State a = State::term(1.0, {xH()}) + State::term(1.0, {yH()});
  State b = cplx{0.0, 1.0} * a;
  CHECK(fidelity(a, b) == doctest::Approx(1.0));
  State c = State::term(1.0, {xH()}) - State::term(1.0, {yH()});
  CHECK(fidelity(a, c) == doctest::Approx(0.0));
  CHECK_THROWS_AS(fidelity(a, State{}), std::invalid_argument);
}

TEST_CASE("tensor multiplies norms and requires disjoint paths") {
  std::mt19937_64 rng(7);
  State a = random_state(rng, {{"x", Pol::H}, {"x", Pol::V}}, 2, 4);
  State b = random_state(rng, {{"z", Pol::H}, {"z", Pol::V}}, 1, 3);
  State ab = tensor(a, b);
  CHECK(ab.squared_norm() ==
        doctest::Approx(a.squared_norm() * b.squared_norm()).epsilon(1e-12));
  CHECK(ab.squared_norm() == doctest::Approx(brute_force_squared_norm(ab)).epsilon(1e-12));
  CHECK_THROWS_AS(tensor(a, a), std::invalid_argument);
}

TEST_CASE("normalization and zero-state rejection") {
  State s = State::term(3.0, {xH()});
  CHECK(s.normalized().squared_norm() == doctest::Approx(1.0));
  CHECK_THROWS_AS(State{}.normalized(), std::invalid_argument);
}

TEST_CASE("photon count is uniform or an error") {
  State s = State::term(1.0, {xH()});
  CHECK(s.photon_count() == 1);
  s += State::term(1.0, {xH(), yH()});
  CHECK_THROWS_AS(s.photon_count(), std::runtime_error);
  CHECK(State{}.photon_count() == 0);
}

TEST_CASE("coupler splits a single photon evenly") {
  State out = apply_mode_map(State::term(1.0, {xH()}), coupler_xy());
  REQUIRE(out.term_count() == 2);
  CHECK(out.terms().at(Monomial({xH()})) == cplx{kInvSqrt2, 0.0});
  CHECK(out.terms().at(Monomial({yH()})) == cplx{kInvSqrt2, 0.0});
}

TEST_CASE("two indistinguishable photons bunch at a balanced coupler") {
  State in = State::term(1.0, {xH(), yH()});
  State out = apply_mode_map(in, coupler_xy());
  REQUIRE(out.term_count() == 2);
  CHECK(out.terms().at(Monomial({xH(), xH()})).real() == doctest::Approx(0.5));
  CHECK(out.terms().at(Monomial({yH(), yH()})).real() == doctest::Approx(-0.5));
  CHECK(out.terms().count(Monomial({xH(), yH()})) == 0);
  CHECK(out.squared_norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("photons distinguishable in time do not bunch") {
  State in = State::term(1.0, {xH(0), yH(1)});
  State out = apply_mode_map(in, coupler_xy());
  CHECK(out.term_count() == 4);
  CHECK(out.squared_norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(out.terms().count(Monomial({xH(0), yH(1)})) == 1);
}

TEST_CASE("unmapped rails pass through as identity") {
  State in = State::term(1.0, {xV(3)});
  State out = apply_mode_map(in, coupler_xy());
  CHECK(out.terms().at(Monomial({xV(3)})) == cplx{1.0, 0.0});
}

TEST_CASE("non-isometric maps are rejected with a diagnostic") {
  ModeMap bad;
  bad.set(Rail{"x", Pol::H}, {{Rail{"x", Pol::H}, 0, kInvSqrt2}, {Rail{"y", Pol::H}, 0, kInvSqrt2}});
  bad.set(Rail{"y", Pol::H}, {{Rail{"x", Pol::H}, 0, kInvSqrt2}, {Rail{"y", Pol::H}, 0, kInvSqrt2}});
  const IsometryReport rep = check_isometry(bad);
  CHECK_FALSE(rep.pass);
  CHECK(rep.max_deviation > 0.9);
  CHECK(rep.detail.find("singular value") != std::string::npos);
  CHECK_THROWS_AS(apply_mode_map(State::term(1.0, {xH()}), bad), std::invalid_argument);
}

TEST_CASE("a photon sitting on a map target without being mapped is a collision") {
  ModeMap shift_over;
  shift_over.set(Rail{"x", Pol::H}, {{Rail{"y", Pol::H}, 0, 1.0}});
  CHECK(check_isometry(shift_over).pass);
  CHECK_THROWS_AS(apply_mode_map(State::term(1.0, {yH()}), shift_over), std::invalid_argument);
  State moved = apply_mode_map(State::term(1.0, {xH()}), shift_over);
  CHECK(moved.terms().count(Monomial({yH()})) == 1);
}

TEST_CASE("time shifts relabel bins and respect the t >= 0 floor") {
  ModeMap delay;
  delay.set(Rail{"x", Pol::H}, {{Rail{"x", Pol::H}, 2, 1.0}});
  CHECK(check_isometry(delay).pass);
  State out = apply_mode_map(State::term(1.0, {xH(0), xV(0)}), delay);
  CHECK(out.terms().count(Monomial({xH(2), xV(0)})) == 1);

  State back = apply_mode_map(out, delay.inverse());
  CHECK(fidelity(back, State::term(1.0, {xH(0), xV(0)})) == doctest::Approx(1.0));

  CHECK_THROWS_AS(apply_mode_map(State::term(1.0, {xH(0)}), delay.inverse()),
                  std::invalid_argument);
}

TEST_CASE("random unitaries preserve norms and inner products") {
  std::mt19937_64 rng(99);
  const std::vector<Rail> rails = {{"x", Pol::H}, {"x", Pol::V}, {"y", Pol::H}, {"y", Pol::V}};
  for (int trial = 0; trial < 10; ++trial) {
    ModeMap u = random_unitary_map(rng, rails);
    CHECK(check_isometry(u).pass);
    State a = random_state(rng, rails, 1 + trial % 3, 4);
    State b = random_state(rng, rails, 1 + trial % 3, 4);
    State ua = apply_mode_map(a, u);
    State ub = apply_mode_map(b, u);
    CHECK(ua.squared_norm() == doctest::Approx(a.squared_norm()).epsilon(1e-12));
    const cplx before = inner_product(a, b);
    const cplx after = inner_product(ua, ub);
    CHECK(std::abs(before - after) < 1e-10);
  }
}

TEST_CASE("inverse of a unitary map undoes it") {
  std::mt19937_64 rng(1234);
  const std::vector<Rail> rails = {{"x", Pol::H}, {"y", Pol::H}, {"z", Pol::H}};
  ModeMap u = random_unitary_map(rng, rails);
  State s = random_state(rng, rails, 2, 5);
  State round = apply_mode_map(apply_mode_map(s, u), u.inverse());
  CHECK(fidelity(round, s) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("map images must not be empty or cancel") {
  ModeMap m;
  CHECK_THROWS_AS(m.set(Rail{"x", Pol::H}, {}), std::invalid_argument);
  CHECK_THROWS_AS(m.set(Rail{"x", Pol::H},
                        {{Rail{"y", Pol::H}, 0, 1.0}, {Rail{"y", Pol::H}, 0, -1.0}}),
                  std::invalid_argument);
}

}  // TEST_SUITE
