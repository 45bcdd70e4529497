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

#include "hyperecp/fock.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace hyperecp::fock {

const char* pol_name(Pol p) { return p == Pol::H ? "H" : "V"; }

std::string Mode::str() const {
  std::ostringstream os;
  os << path << ":" << pol_name(pol) << ":t" << tbin;
  return os.str();
}

std::string Rail::str() const { return path + ":" + pol_name(pol); }

Monomial::Monomial(std::vector<Mode> modes) : modes_(std::move(modes)) {
  for (const Mode& m : modes_) {
    if (m.path.empty()) throw std::invalid_argument("mode with empty path label");
    if (m.tbin < 0) throw std::invalid_argument("mode with negative time bin: " + m.str());
  }
  std::sort(modes_.begin(), modes_.end());
}

double Monomial::factorial_weight() const {
  double w = 1.0;
  std::size_t i = 0;
  while (i < modes_.size()) {
    std::size_t j = i;
    while (j < modes_.size() && modes_[j] == modes_[i]) ++j;
    for (std::size_t n = 2; n <= j - i; ++n) w *= static_cast<double>(n);
    i = j;
  }
  return w;
}

bool Monomial::touches_path(const std::string& path) const {
  for (const Mode& m : modes_)
    if (m.path == path) return true;
  return false;
}

std::string Monomial::str() const {
  std::ostringstream os;
  os << "|";
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (i) os << " ";
    os << modes_[i].str();
  }
  os << ">";
  return os.str();
}

State State::term(cplx amp, std::vector<Mode> modes) {
  State s;
  s.add(amp, Monomial(std::move(modes)));
  return s;
}

void State::add(cplx amp, Monomial m) {
  auto [it, inserted] = terms_.try_emplace(std::move(m), amp);
  if (!inserted) {
    it->second += amp;
    if (std::abs(it->second) <= tol::amplitude) terms_.erase(it);
  }
}

double State::squared_norm() const {
  double n = 0.0;
  for (const auto& [m, a] : terms_) n += std::norm(a) * m.factorial_weight();
  return n;
}

State State::pruned(double eps) const {
  State out;
  for (const auto& [m, a] : terms_)
    if (std::abs(a) > eps) out.terms_.emplace(m, a);
  return out;
}

State State::normalized() const {
  const double n = squared_norm();
  if (n <= 0.0) throw std::invalid_argument("cannot normalize a zero state");
  State out = *this;
  const double inv = 1.0 / std::sqrt(n);
  for (auto& [m, a] : out.terms_) a *= inv;
  return out;
}

int State::photon_count() const {
  if (terms_.empty()) return 0;
  const int n = terms_.begin()->first.photon_count();
  for (const auto& [m, a] : terms_)
    if (m.photon_count() != n)
      throw std::runtime_error("state mixes photon numbers: " + m.str());
  return n;
}

std::set<std::string> State::paths() const {
  std::set<std::string> out;
  for (const auto& [m, a] : terms_)
    for (const Mode& md : m.modes()) out.insert(md.path);
  return out;
}

State& State::operator+=(const State& o) {
  for (const auto& [m, a] : o.terms_) add(a, m);
  return *this;
}

State& State::operator-=(const State& o) {
  for (const auto& [m, a] : o.terms_) add(-a, m);
  return *this;
}

State& State::operator*=(cplx c) {
  if (c == cplx{0.0, 0.0}) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, a] : terms_) a *= c;
  return *this;
}

std::string State::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, a] : terms_) {
    if (!first) os << " + ";
    first = false;
    char buf[64];
    std::snprintf(buf, sizeof buf, "(%.6g%+.6gi)", a.real(), a.imag());
    os << buf << " " << m.str();
  }
  return os.str();
}

cplx inner_product(const State& a, const State& b) {
  // Iterate the smaller map; both are keyed by canonical monomials.
  const State& small = a.term_count() <= b.term_count() ? a : b;
  const State& large = a.term_count() <= b.term_count() ? b : a;
  cplx out{0.0, 0.0};
  for (const auto& [m, amp] : small.terms()) {
    auto it = large.terms().find(m);
    if (it == large.terms().end()) continue;
    const cplx amp_a = (&small == &a) ? amp : it->second;
    const cplx amp_b = (&small == &a) ? it->second : amp;
    out += std::conj(amp_a) * amp_b * m.factorial_weight();
  }
  return out;
}

double fidelity(const State& a, const State& b) {
  const double na = a.squared_norm();
  const double nb = b.squared_norm();
  if (na <= 0.0 || nb <= 0.0) throw std::invalid_argument("fidelity of a zero state");
  return std::norm(inner_product(a, b)) / (na * nb);
}

State tensor(const State& a, const State& b) {
  const auto pa = a.paths();
  for (const std::string& p : b.paths())
    if (pa.count(p))
      throw std::invalid_argument("tensor operands share path '" + p + "'");
  State out;
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      std::vector<Mode> modes = ma.modes();
      modes.insert(modes.end(), mb.modes().begin(), mb.modes().end());
      out.add(ca * cb, Monomial(std::move(modes)));
    }
  }
  return out;
}

void ModeMap::set(const Rail& source, std::vector<Entry> image) {
  if (image.empty()) throw std::invalid_argument("empty image for rail " + source.str());
  // Merge duplicate (target, shift) entries so Gram sums see each cell once.
  std::map<std::pair<Rail, int>, cplx> merged;
  for (const Entry& e : image) merged[{e.target, e.tbin_shift}] += e.coeff;
  std::vector<Entry> out;
  for (const auto& [key, c] : merged)
    if (std::abs(c) > 0.0) out.push_back(Entry{key.first, key.second, c});
  if (out.empty()) throw std::invalid_argument("image of rail " + source.str() + " cancels to zero");
  table_[source] = std::move(out);
}

std::set<Rail> ModeMap::source_rails() const {
  std::set<Rail> out;
  for (const auto& [r, img] : table_) out.insert(r);
  return out;
}

std::set<Rail> ModeMap::image_rails() const {
  std::set<Rail> out;
  for (const auto& [r, img] : table_)
    for (const Entry& e : img) out.insert(e.target);
  return out;
}

int ModeMap::max_shift() const {
  int s = 0;
  for (const auto& [r, img] : table_)
    for (const Entry& e : img) s = std::max(s, e.tbin_shift);
  return s;
}

int ModeMap::min_shift() const {
  int s = 0;
  for (const auto& [r, img] : table_)
    for (const Entry& e : img) s = std::min(s, e.tbin_shift);
  return s;
}

ModeMap ModeMap::inverse() const {
  std::map<Rail, std::vector<Entry>> inv;
  for (const auto& [r, img] : table_)
    for (const Entry& e : img)
      inv[e.target].push_back(Entry{r, -e.tbin_shift, std::conj(e.coeff)});
  ModeMap out;
  for (auto& [r, img] : inv) out.set(r, std::move(img));
  return out;
}

namespace {

// Dense matrix of the map over a time window wide enough that every column's
// image lies inside the row range; its singular values equal those of the
// full lattice operator restricted to the window.
Eigen::MatrixXcd windowed_matrix(const ModeMap& m) {
  const int lo = m.min_shift();
  const int hi = m.max_shift();
  const int width = (hi - lo) + 3;

  const std::set<Rail> source_set = m.source_rails();
  const std::set<Rail> target_set = m.image_rails();
  std::vector<Rail> sources(source_set.begin(), source_set.end());
  std::vector<Rail> targets(target_set.begin(), target_set.end());

  std::map<Rail, int> target_index;
  for (std::size_t i = 0; i < targets.size(); ++i) target_index[targets[i]] = static_cast<int>(i);

  const int row_bins = (width - 1 + hi) - lo + 1;
  Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(
      static_cast<Eigen::Index>(targets.size()) * row_bins,
      static_cast<Eigen::Index>(sources.size()) * width);

  for (std::size_t si = 0; si < sources.size(); ++si) {
    const auto& img = m.table().at(sources[si]);
    for (int t = 0; t < width; ++t) {
      const Eigen::Index col = static_cast<Eigen::Index>(si) * width + t;
      for (const ModeMap::Entry& e : img) {
        const int row_bin = t + e.tbin_shift - lo;
        const Eigen::Index row =
            static_cast<Eigen::Index>(target_index.at(e.target)) * row_bins + row_bin;
        mat(row, col) += e.coeff;
      }
    }
  }
  return mat;
}

}  // namespace

IsometryReport check_isometry(const ModeMap& m) {
  IsometryReport rep;
  if (m.table().empty()) {
    rep.pass = true;
    return rep;
  }

  // Covariant Gram: columns (r1, t) and (r2, t + d) overlap with weight
  // g[d] = sum over entry pairs on a common target with shift difference d.
  // Isometry over the whole time lattice is exactly g = identity.
  double worst = 0.0;
  std::string worst_pair;
  const auto& table = m.table();
  for (const auto& [r1, img1] : table) {
    for (const auto& [r2, img2] : table) {
      std::map<int, cplx> g;
      for (const ModeMap::Entry& e1 : img1)
        for (const ModeMap::Entry& e2 : img2)
          if (e1.target == e2.target) g[e2.tbin_shift - e1.tbin_shift] += std::conj(e1.coeff) * e2.coeff;
      if (r1 == r2) g[0] -= 1.0;
      for (const auto& [d, v] : g) {
        const double dev = std::abs(v);
        if (dev > worst) {
          worst = dev;
          worst_pair = r1.str() + " vs " + r2.str() + " at shift " + std::to_string(d);
        }
      }
    }
  }

  rep.max_deviation = worst;
  rep.pass = worst <= tol::unitarity;
  if (!rep.pass) {
    const Eigen::MatrixXcd mat = windowed_matrix(m);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(mat);
    double bad_sv = 1.0;
    double bad_dev = -1.0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
      const double sv = svd.singularValues()(i);
      const double dev = std::abs(sv - 1.0);
      if (dev > bad_dev) {
        bad_dev = dev;
        bad_sv = sv;
      }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "gram deviation %.3e (%s); induced matrix has singular value %.12g",
                  worst, worst_pair.c_str(), bad_sv);
    rep.detail = buf;
  }
  return rep;
}

State apply_mode_map(const State& s, const ModeMap& m) {
  const IsometryReport rep = check_isometry(m);
  if (!rep.pass)
    throw std::invalid_argument("mode map is not an isometry: " + rep.detail);

  const std::set<Rail> images = m.image_rails();

  State out;
  for (const auto& [mono, amp] : s.terms()) {
    // A photon on an unmapped rail passes through unchanged; if that rail is
    // also a target of the map, identity and image amplitudes would collide
    // and the combined action would not be an isometry.
    for (const Mode& md : mono.modes()) {
      const Rail r = rail_of(md);
      if (!m.maps(r) && images.count(r))
        throw std::invalid_argument("rail " + r.str() +
                                    " is a map target but carries an unmapped photon");
    }

    // Photon-by-photon expansion of the substitution product.
    std::vector<std::pair<std::vector<Mode>, cplx>> partials;
    partials.emplace_back(std::vector<Mode>{}, amp);
    for (const Mode& md : mono.modes()) {
      const Rail r = rail_of(md);
      if (!m.maps(r)) {
        for (auto& [modes, c] : partials) modes.push_back(md);
        continue;
      }
      const auto& img = m.table().at(r);
      std::vector<std::pair<std::vector<Mode>, cplx>> next;
      next.reserve(partials.size() * img.size());
      for (const auto& [modes, c] : partials) {
        for (const ModeMap::Entry& e : img) {
          const int tbin = md.tbin + e.tbin_shift;
          if (tbin < 0)
            throw std::invalid_argument("shift drives time bin negative on rail " + r.str());
          std::vector<Mode> grown = modes;
          grown.push_back(Mode{e.target.path, e.target.pol, tbin});
          next.emplace_back(std::move(grown), c * e.coeff);
        }
      }
      partials = std::move(next);
    }
    for (auto& [modes, c] : partials) out.add(c, Monomial(std::move(modes)));
  }
  return out.pruned();
}

}  // namespace hyperecp::fock
