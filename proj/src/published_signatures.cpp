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

#include "hyperecp/published_signatures.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace hyperecp::published {

using protocol::RefClass;
using protocol::ReferenceFamily;

namespace {

using Clicks = std::vector<std::pair<int, int>>;
using Pairs = std::vector<std::pair<int, int>>;

// Detector pairings as printed: same side, listed by the lower number.
const Pairs kPairs12{{1, 2}, {3, 4}, {5, 6}, {7, 8}};
const Pairs kPairs14{{1, 4}, {2, 3}, {5, 8}, {6, 7}};
const Pairs kPairs13{{1, 3}, {2, 4}, {5, 7}, {6, 8}};
// Cross-side pairings.
const Pairs kCross18{{1, 8}, {2, 7}, {3, 6}, {4, 5}};
const Pairs kCross16{{1, 6}, {2, 5}, {3, 8}, {4, 7}};

std::vector<Clicks> singles() {
  std::vector<Clicks> out;
  for (int d = 1; d <= 8; ++d) out.push_back({{d, 0}});
  return out;
}

std::vector<Clicks> zero_pairs(const Pairs& ps) {
  std::vector<Clicks> out;
  for (const auto& [x, y] : ps) out.push_back({{x, 0}, {y, 0}});
  return out;
}

// One click two bins late; both assignments of the delay are listed.
std::vector<Clicks> delayed_both(const Pairs& ps) {
  std::vector<Clicks> out;
  for (const auto& [x, y] : ps) {
    out.push_back({{x, 2}, {y, 0}});
    out.push_back({{x, 0}, {y, 2}});
  }
  return out;
}

// The same detector clicking twice, two bins apart.
std::vector<Clicks> delayed_self() {
  std::vector<Clicks> out;
  for (int d = 1; d <= 8; ++d) out.push_back({{d, 0}, {d, 2}});
  return out;
}

std::vector<Clicks> concat(std::vector<Clicks> a, const std::vector<Clicks>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<Clicks> delayed_plus_group() {
  return concat(delayed_self(), delayed_both(kPairs14));
}

std::vector<Clicks> delayed_minus_group() {
  Pairs p = kPairs12;
  p.insert(p.end(), kPairs13.begin(), kPairs13.end());
  return delayed_both(p);
}

void add_group(std::vector<PublishedRow>& rows, const std::string& charlie,
               const std::vector<Clicks>& group, RefClass cls, int pol, int spa) {
  for (Clicks clicks : group) {
    std::sort(clicks.begin(), clicks.end());
    rows.push_back({charlie, std::move(clicks), ReferenceFamily{cls, pol, spa}});
  }
}

}  // namespace

std::vector<PublishedRow> bell_table() {
  std::vector<PublishedRow> rows;
  add_group(rows, "", singles(), RefClass::Phi1, +1, +1);
  add_group(rows, "", zero_pairs(kPairs12), RefClass::Phi1, -1, +1);
  add_group(rows, "", zero_pairs(kPairs14), RefClass::Phi1, +1, -1);
  add_group(rows, "", zero_pairs(kPairs13), RefClass::Phi1, -1, -1);
  add_group(rows, "", zero_pairs(kCross18), RefClass::Phi0, +1, -1);
  add_group(rows, "", zero_pairs(kCross16), RefClass::Phi0, -1, +1);
  add_group(rows, "", delayed_minus_group(), RefClass::Phi0, -1, -1);
  add_group(rows, "", delayed_plus_group(), RefClass::Phi0, +1, +1);
  return rows;
}

std::vector<PublishedRow> ghz_table() {
  std::vector<PublishedRow> rows;

  struct Block {
    const char* charlie;
    std::vector<Clicks> group;
  };
  auto add_family = [&rows](RefClass cls, int pol, int spa,
                            const std::vector<Block>& blocks) {
    for (const Block& b : blocks) add_group(rows, b.charlie, b.group, cls, pol, spa);
  };

  add_family(RefClass::Psi1, +1, +1,
             {{"DH1", singles()},
              {"DH2", zero_pairs(kPairs14)},
              {"DV1", zero_pairs(kPairs12)},
              {"DV2", zero_pairs(kPairs13)}});
  add_family(RefClass::Psi1, +1, -1,
             {{"DH2", singles()},
              {"DH1", zero_pairs(kPairs14)},
              {"DV2", zero_pairs(kPairs12)},
              {"DV1", zero_pairs(kPairs13)}});
  add_family(RefClass::Psi1, -1, +1,
             {{"DV1", singles()},
              {"DV2", zero_pairs(kPairs14)},
              {"DH1", zero_pairs(kPairs12)},
              {"DH2", zero_pairs(kPairs13)}});
  add_family(RefClass::Psi1, -1, -1,
             {{"DV2", singles()},
              {"DV1", zero_pairs(kPairs14)},
              {"DH2", zero_pairs(kPairs12)},
              {"DH1", zero_pairs(kPairs13)}});

  add_family(RefClass::Psi0, +1, +1,
             {{"DH2", zero_pairs(kCross18)},
              {"DV1", zero_pairs(kCross16)},
              {"DH1", delayed_plus_group()},
              {"DV2", delayed_minus_group()}});
  add_family(RefClass::Psi0, +1, -1,
             {{"DH1", zero_pairs(kCross18)},
              {"DV2", zero_pairs(kCross16)},
              {"DH2", delayed_plus_group()},
              {"DV1", delayed_minus_group()}});
  add_family(RefClass::Psi0, -1, +1,
             {{"DV2", zero_pairs(kCross18)},
              {"DH1", zero_pairs(kCross16)},
              {"DV1", delayed_plus_group()},
              {"DH2", delayed_minus_group()}});
  add_family(RefClass::Psi0, -1, -1,
             {{"DV1", zero_pairs(kCross18)},
              {"DH2", zero_pairs(kCross16)},
              {"DV2", delayed_plus_group()},
              {"DH1", delayed_minus_group()}});
  return rows;
}

std::string Relabeling::map_charlie(const std::string& name) const {
  if (swap_charlie_h) {
    if (name == "DH1") return "DH2";
    if (name == "DH2") return "DH1";
  }
  if (swap_charlie_v) {
    if (name == "DV1") return "DV2";
    if (name == "DV2") return "DV1";
  }
  return name;
}

std::string Relabeling::str(bool with_charlie) const {
  std::string out = "detector relabeling:";
  for (int i = 1; i <= 8; ++i) {
    out += i == 1 ? " " : ", ";
    out += "D" + std::to_string(i) + "->D" + std::to_string(det[i]);
  }
  if (with_charlie) {
    for (const char* name : {"DH1", "DV1", "DH2", "DV2"}) {
      out += ", ";
      out += name;
      out += "->" + map_charlie(name);
    }
  }
  return out;
}

namespace {

struct SimRow {
  std::string charlie;
  Clicks clicks;
  std::string family;
};

int det_number(const std::string& name) {
  if (name.size() == 2 && name[0] == 'D' && name[1] >= '1' && name[1] <= '8')
    return name[1] - '0';
  throw std::runtime_error("unexpected detector name " + name);
}

std::string row_key(const std::string& charlie, Clicks clicks,
                    const std::string& family) {
  std::sort(clicks.begin(), clicks.end());
  std::string key = charlie + "|";
  for (const auto& [d, t] : clicks)
    key += std::to_string(d) + "@" + std::to_string(t) + "+";
  return key + "|" + family;
}

std::vector<SimRow> sim_rows(const std::vector<detection::Outcome>& outcomes,
                             bool with_charlie) {
  std::vector<SimRow> rows;
  for (const detection::Outcome& o : outcomes) {
    if (o.cls == detection::OutcomeClass::Fail) continue;
    if (!o.reference)
      throw std::runtime_error("non-Fail outcome without a reference");
    if (with_charlie != !o.charlie_clicks.empty())
      throw std::runtime_error("outcome has the wrong Charlie record");
    SimRow r;
    r.charlie = o.charlie_pattern();
    for (const detection::Click& c : o.ab_clicks)
      r.clicks.emplace_back(det_number(c.detector), c.tbin);
    r.family = o.reference->name();
    rows.push_back(std::move(r));
  }
  return rows;
}

Relabeling search(const std::vector<SimRow>& sim,
                  const std::vector<PublishedRow>& published, bool with_charlie) {
  if (sim.size() != published.size())
    throw std::runtime_error(
        "derived table has " + std::to_string(sim.size()) +
        " non-Fail rows, published table has " + std::to_string(published.size()));

  std::set<std::string> target;
  for (const PublishedRow& r : published)
    target.insert(row_key(r.charlie, r.clicks, r.family.name()));
  if (target.size() != published.size())
    throw std::runtime_error("published table repeats a row");

  std::array<int, 4> alice{1, 2, 3, 4};
  const int charlie_options = with_charlie ? 4 : 1;
  do {
    std::array<int, 4> bob{5, 6, 7, 8};
    do {
      for (int copt = 0; copt < charlie_options; ++copt) {
        Relabeling rl;
        for (int i = 0; i < 4; ++i) rl.det[i + 1] = alice[i];
        for (int i = 0; i < 4; ++i) rl.det[i + 5] = bob[i];
        rl.swap_charlie_h = (copt & 1) != 0;
        rl.swap_charlie_v = (copt & 2) != 0;

        std::set<std::string> mapped;
        for (const SimRow& r : sim) {
          Clicks clicks = r.clicks;
          for (auto& [d, t] : clicks) d = rl.det[d];
          mapped.insert(row_key(rl.map_charlie(r.charlie), std::move(clicks), r.family));
        }
        if (mapped == target) return rl;
      }
    } while (std::next_permutation(bob.begin(), bob.end()));
  } while (std::next_permutation(alice.begin(), alice.end()));

  throw std::runtime_error(
      "no side-preserving detector relabeling aligns the derived table with the published one");
}

}  // namespace

Relabeling match_bell(const std::vector<detection::Outcome>& outcomes) {
  return search(sim_rows(outcomes, false), bell_table(), false);
}

Relabeling match_ghz(const std::vector<detection::Outcome>& outcomes) {
  return search(sim_rows(outcomes, true), ghz_table(), true);
}

}  // namespace hyperecp::published
