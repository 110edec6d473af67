// Copyright 2026 The qrecon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Finite permutation groups acting on a VariableSpace, materialized as full
 * element tables so that every group-theoretic question can be answered by
 * exhaustive quantification.
 */

#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "qrecon/errors.hpp"
#include "qrecon/variables.hpp"

namespace qrecon {

/// Bijection of {0..n-1}; `image()[i]` is the image of point i.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<std::size_t> image) : image_(std::move(image)) {
    std::vector<bool> hit(image_.size(), false);
    for (auto p : image_) {
      if (p >= image_.size() || hit[p]) {
        throw GroupAxiomError("index list is not a permutation of " +
                              std::to_string(image_.size()) + " points");
      }
      hit[p] = true;
    }
  }

  static Permutation identity(std::size_t n) {
    std::vector<std::size_t> img(n);
    std::iota(img.begin(), img.end(), std::size_t{0});
    return Permutation(std::move(img));
  }

  /// Transposition of points a and b.
  static Permutation swap(std::size_t n, std::size_t a, std::size_t b) {
    auto p = identity(n);
    std::swap(p.image_.at(a), p.image_.at(b));
    return p;
  }

  std::size_t size() const noexcept { return image_.size(); }
  std::size_t operator()(std::size_t i) const { return image_[i]; }
  const std::vector<std::size_t>& image() const noexcept { return image_; }

  bool is_identity() const {
    for (std::size_t i = 0; i < image_.size(); ++i) {
      if (image_[i] != i) return false;
    }
    return true;
  }

  Permutation inverse() const {
    std::vector<std::size_t> inv(image_.size());
    for (std::size_t i = 0; i < image_.size(); ++i) inv[image_[i]] = i;
    Permutation out;
    out.image_ = std::move(inv);
    return out;
  }

  /// (a * b)(i) = a(b(i)): apply b first.
  friend Permutation operator*(const Permutation& a, const Permutation& b) {
    std::vector<std::size_t> img(b.image_.size());
    for (std::size_t i = 0; i < img.size(); ++i) img[i] = a.image_[b.image_[i]];
    Permutation out;
    out.image_ = std::move(img);
    return out;
  }

  friend auto operator<=>(const Permutation&, const Permutation&) = default;

  /// Cycle notation, e.g. "(1 2)" or "()" for the identity.
  std::string cycles() const {
    std::string out;
    std::vector<bool> seen(image_.size(), false);
    for (std::size_t s = 0; s < image_.size(); ++s) {
      if (seen[s] || image_[s] == s) continue;
      out += "(";
      for (std::size_t c = s; !seen[c]; c = image_[c]) {
        seen[c] = true;
        if (c != s) out += " ";
        out += std::to_string(c);
      }
      out += ")";
    }
    return out.empty() ? "()" : out;
  }

 private:
  std::vector<std::size_t> image_;
};

struct GroupReport {
  bool valid = true;
  std::vector<std::string> violations;
  std::size_t order = 0;
};

/// A finite set of permutations of `space`, ideally a group. The element
/// ordering is part of the value and drives every "first witness" rule.
class GroupAction {
 public:
  static constexpr std::size_t kDefaultCap = 10080;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  GroupAction() = default;
  GroupAction(std::string id, VariableSpace space, std::vector<Permutation> elements)
      : id_(std::move(id)), space_(std::move(space)), elements_(std::move(elements)) {
    for (std::size_t i = 0; i < elements_.size(); ++i) {
      if (elements_[i].size() != space_.size()) {
        throw GroupAxiomError("element " + std::to_string(i) + " of '" + id_ + "' acts on " +
                              std::to_string(elements_[i].size()) + " points, space has " +
                              std::to_string(space_.size()));
      }
      index_.emplace(elements_[i], i);
      if (identity_ == npos && elements_[i].is_identity()) identity_ = i;
    }
  }

  /// Closure of `generators` under composition, breadth-first from the
  /// identity; throws once the group outgrows `cap`.
  static GroupAction generate(std::string id, VariableSpace space,
                              const std::vector<Permutation>& generators,
                              std::size_t cap = kDefaultCap) {
    std::vector<Permutation> elems{Permutation::identity(space.size())};
    std::map<Permutation, std::size_t> seen{{elems.front(), 0}};
    std::deque<std::size_t> queue{0};
    while (!queue.empty()) {
      const Permutation current = elems[queue.front()];
      queue.pop_front();
      for (const auto& g : generators) {
        if (g.size() != space.size()) {
          throw GroupAxiomError("generator size does not match space '" + space.id() + "'");
        }
        Permutation next = g * current;
        if (seen.emplace(next, elems.size()).second) {
          if (elems.size() >= cap) {
            throw GroupAxiomError("group '" + id + "' exceeds the cap of " +
                                  std::to_string(cap) + " elements");
          }
          queue.push_back(elems.size());
          elems.push_back(std::move(next));
        }
      }
    }
    return GroupAction(std::move(id), std::move(space), std::move(elems));
  }

  /// Z_n acting by i -> i+1 mod n; element k is the shift by k.
  static GroupAction cyclic(std::string id, VariableSpace space) {
    const std::size_t n = space.size();
    std::vector<Permutation> elems;
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<std::size_t> img(n);
      for (std::size_t i = 0; i < n; ++i) img[i] = (i + k) % n;
      elems.emplace_back(std::move(img));
    }
    return GroupAction(std::move(id), std::move(space), std::move(elems));
  }

  /// S_n with elements in lexicographic order of their image tables.
  static GroupAction symmetric(std::string id, VariableSpace space,
                               std::size_t cap = kDefaultCap) {
    std::vector<std::size_t> img(space.size());
    std::iota(img.begin(), img.end(), std::size_t{0});
    std::vector<Permutation> elems;
    do {
      if (elems.size() >= cap) {
        throw GroupAxiomError("symmetric group on " + std::to_string(space.size()) +
                              " points exceeds the cap");
      }
      elems.emplace_back(img);
    } while (std::next_permutation(img.begin(), img.end()));
    return GroupAction(std::move(id), std::move(space), std::move(elems));
  }

  static GroupAction trivial(std::string id, VariableSpace space) {
    const std::size_t n = space.size();
    return GroupAction(std::move(id), std::move(space), {Permutation::identity(n)});
  }

  const std::string& id() const noexcept { return id_; }
  const VariableSpace& space() const noexcept { return space_; }
  const std::vector<Permutation>& elements() const noexcept { return elements_; }
  std::size_t order() const noexcept { return elements_.size(); }
  const Permutation& element(std::size_t i) const { return elements_.at(i); }
  std::size_t identity_index() const noexcept { return identity_; }

  std::optional<std::size_t> index_of(const Permutation& p) const {
    auto it = index_.find(p);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool contains(const Permutation& p) const { return index_.count(p) != 0; }

  friend bool operator==(const GroupAction& a, const GroupAction& b) {
    return a.id_ == b.id_ && a.space_ == b.space_ && a.elements_ == b.elements_;
  }

 private:
  std::string id_;
  VariableSpace space_;
  std::vector<Permutation> elements_;
  std::map<Permutation, std::size_t> index_;
  std::size_t identity_ = npos;
};

/// Checks the group axioms exhaustively: identity, closure, inverses and
/// distinctness of the listed elements.
inline GroupReport verify_group(const GroupAction& g) {
  GroupReport r;
  r.order = g.order();
  if (g.identity_index() == GroupAction::npos) {
    r.violations.push_back("identity missing");
  }
  std::map<Permutation, std::size_t> counts;
  for (const auto& e : g.elements()) ++counts[e];
  for (const auto& [p, c] : counts) {
    if (c > 1) r.violations.push_back("element " + p.cycles() + " listed " + std::to_string(c) + " times");
  }
  for (const auto& a : g.elements()) {
    if (!g.contains(a.inverse())) {
      r.violations.push_back("inverse of " + a.cycles() + " missing");
    }
  }
  bool closure_reported = false;
  for (const auto& a : g.elements()) {
    for (const auto& b : g.elements()) {
      auto ab = a * b;
      if (!g.contains(ab)) {
        r.violations.push_back("not closed: " + a.cycles() + " * " + b.cycles() + " = " +
                               ab.cycles() + " missing");
        closure_reported = true;
        break;
      }
    }
    if (closure_reported) break;
  }
  r.valid = r.violations.empty();
  return r;
}

inline void require_group(const GroupAction& g) {
  auto r = verify_group(g);
  if (!r.valid) {
    throw GroupAxiomError("'" + g.id() + "' is not a group: " + r.violations.front());
  }
}

/// Orbit partition; cells are sorted and ordered by their smallest point.
inline std::vector<std::vector<std::size_t>> orbits(const GroupAction& g) {
  require_group(g);
  const std::size_t n = g.space().size();
  std::vector<std::size_t> cell_of(n, GroupAction::npos);
  std::vector<std::vector<std::size_t>> cells;
  for (std::size_t p = 0; p < n; ++p) {
    if (cell_of[p] != GroupAction::npos) continue;
    std::vector<std::size_t> cell;
    for (const auto& e : g.elements()) {
      const auto q = e(p);
      if (cell_of[q] == GroupAction::npos) {
        cell_of[q] = cells.size();
        cell.push_back(q);
      }
    }
    std::sort(cell.begin(), cell.end());
    cells.push_back(std::move(cell));
  }
  return cells;
}

inline bool is_transitive(const GroupAction& g) { return orbits(g).size() == 1; }

/// Only the identity fixes any point (the action is free).
inline bool isotropy_trivial(const GroupAction& g) {
  require_group(g);
  for (const auto& e : g.elements()) {
    if (e.is_identity()) continue;
    for (std::size_t p = 0; p < e.size(); ++p) {
      if (e(p) == p) return false;
    }
  }
  return true;
}

struct InvariantMeasure {
  VariableSpace space;
  std::vector<double> weights;
  /// Dimension of the cone of invariant weightings: one scale per orbit.
  std::size_t scale_freedom = 1;

  double weight(std::size_t i) const { return weights.at(i); }

  bool is_invariant_under(const GroupAction& g) const {
    for (const auto& e : g.elements()) {
      for (std::size_t p = 0; p < weights.size(); ++p) {
        if (weights[e(p)] != weights[p]) return false;
      }
    }
    return true;
  }

  friend bool operator==(const InvariantMeasure&, const InvariantMeasure&) = default;
};

/// Counting measure; invariant under every permutation action. For a
/// transitive action it is the unique invariant measure up to scale.
inline InvariantMeasure invariant_measure(const GroupAction& g) {
  InvariantMeasure mu{g.space(), std::vector<double>(g.space().size(), 1.0), orbits(g).size()};
  if (!mu.is_invariant_under(g)) {
    throw GroupAxiomError("counting measure not invariant under '" + g.id() + "'");
  }
  return mu;
}

}  // namespace qrecon
