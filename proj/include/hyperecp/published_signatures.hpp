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
#include <string>
#include <utility>
#include <vector>

#include "hyperecp/detection.hpp"

// The externally published click-signature tables for both protocols,
// encoded verbatim, plus the search for a detector relabeling aligning a
// derived table with them. The publication fixes detector numbers but not
// which analysis rail each number watches, so agreement is claimed only up
// to a bijection that keeps Alice's and Bob's detectors on their own sides
// and, for the three-photon protocol, permutes Charlie's detectors within a
// polarization.

namespace hyperecp::published {

struct PublishedRow {
  std::string charlie;                        // empty in the two-photon table
  std::vector<std::pair<int, int>> clicks;    // (detector number, time bin), sorted
  protocol::ReferenceFamily family;
};

std::vector<PublishedRow> bell_table();  // 60 rows
std::vector<PublishedRow> ghz_table();   // 240 rows

struct Relabeling {
  // det[i] is the published number of simulated detector Di; det[0] unused.
  std::array<int, 9> det{};
  bool swap_charlie_h = false;  // DH1 <-> DH2
  bool swap_charlie_v = false;  // DV1 <-> DV2

  std::string map_charlie(const std::string& name) const;
  std::string str(bool with_charlie) const;
};

// Searches the side-preserving bijections (and Charlie's in-polarization
// swaps) for one under which the non-Fail outcomes reproduce the published
// rows exactly: same click multiset, same family, same feed-forward. Throws
// when the outcome set cannot be aligned.
Relabeling match_bell(const std::vector<detection::Outcome>& outcomes);
Relabeling match_ghz(const std::vector<detection::Outcome>& outcomes);

}  // namespace hyperecp::published
