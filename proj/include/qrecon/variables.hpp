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
 * Theoretical variables as explicit tables over a finite inaccessible space,
 * the "is a function of" partial order and maximality inside a family.
 *
 * Only finite spaces are modelled, so "function" means an arbitrary total
 * map and every order question is decided by partition refinement.
 */

#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "qrecon/errors.hpp"

namespace qrecon {

/// A finite, ordered set of distinct labels. Immutable once built.
class VariableSpace {
 public:
  VariableSpace() = default;
  VariableSpace(std::string id, std::vector<std::string> points)
      : id_(std::move(id)), points_(std::move(points)) {
    if (points_.empty()) {
      throw DomainError("space '" + id_ + "' must contain at least one point");
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (!index_.emplace(points_[i], i).second) {
        throw DomainError("space '" + id_ + "' has duplicate point '" + points_[i] + "'");
      }
    }
  }

  /// Points labelled "0", "1", ..., "n-1".
  static VariableSpace range(std::string id, std::size_t n) {
    std::vector<std::string> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) pts.push_back(std::to_string(i));
    return VariableSpace(std::move(id), std::move(pts));
  }

  const std::string& id() const noexcept { return id_; }
  const std::vector<std::string>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  const std::string& point(std::size_t i) const { return points_.at(i); }

  std::optional<std::size_t> index_of(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  friend bool operator==(const VariableSpace& a, const VariableSpace& b) {
    return a.id_ == b.id_ && a.points_ == b.points_;
  }

 private:
  std::string id_;
  std::vector<std::string> points_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// A total function from Ω_φ to opaque value labels.
class TheoreticalVariable {
 public:
  TheoreticalVariable() = default;
  TheoreticalVariable(std::string id, VariableSpace domain,
                      std::vector<std::string> values, bool accessible = true)
      : id_(std::move(id)),
        domain_(std::move(domain)),
        values_(std::move(values)),
        accessible_(accessible) {
    if (values_.size() != domain_.size()) {
      throw DomainError("variable '" + id_ + "' has " + std::to_string(values_.size()) +
                        " values for a space of " + std::to_string(domain_.size()) +
                        " points");
    }
    std::unordered_map<std::string, std::size_t> seen;
    codes_.reserve(values_.size());
    for (const auto& v : values_) {
      auto [it, inserted] = seen.emplace(v, value_set_.size());
      if (inserted) value_set_.push_back(v);
      codes_.push_back(it->second);
    }
  }

  const std::string& id() const noexcept { return id_; }
  const VariableSpace& domain() const noexcept { return domain_; }
  bool accessible() const noexcept { return accessible_; }

  /// Value label at the i-th point of the domain.
  const std::string& at(std::size_t i) const { return values_.at(i); }
  const std::vector<std::string>& table() const noexcept { return values_; }

  /// Image of the variable, in order of first appearance over the domain.
  const std::vector<std::string>& value_set() const noexcept { return value_set_; }
  std::size_t cardinality() const noexcept { return value_set_.size(); }

  /// Index into value_set() of the value at point i.
  std::size_t code(std::size_t i) const { return codes_.at(i); }
  const std::vector<std::size_t>& codes() const noexcept { return codes_; }

  std::optional<std::size_t> value_index(const std::string& label) const {
    auto it = std::find(value_set_.begin(), value_set_.end(), label);
    if (it == value_set_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - value_set_.begin());
  }

  /// Preimage cells, one per entry of value_set().
  std::vector<std::vector<std::size_t>> preimages() const {
    std::vector<std::vector<std::size_t>> cells(value_set_.size());
    for (std::size_t i = 0; i < codes_.size(); ++i) cells[codes_[i]].push_back(i);
    return cells;
  }

  friend bool operator==(const TheoreticalVariable& a, const TheoreticalVariable& b) {
    return a.id_ == b.id_ && a.domain_ == b.domain_ && a.values_ == b.values_ &&
           a.accessible_ == b.accessible_;
  }

 private:
  std::string id_;
  VariableSpace domain_;
  std::vector<std::string> values_;
  bool accessible_ = true;
  std::vector<std::string> value_set_;
  std::vector<std::size_t> codes_;
};

/// φ itself, seen as a variable: every other variable is a function of it.
inline TheoreticalVariable identity_variable(const VariableSpace& space, std::string id,
                                             bool accessible = false) {
  return TheoreticalVariable(std::move(id), space, space.points(), accessible);
}

/// g∘v for an arbitrary relabelling g of v's values.
inline TheoreticalVariable post_compose(
    const TheoreticalVariable& v, const std::function<std::string(const std::string&)>& g,
    std::string id) {
  std::vector<std::string> out;
  out.reserve(v.table().size());
  for (const auto& label : v.table()) out.push_back(g(label));
  return TheoreticalVariable(std::move(id), v.domain(), std::move(out), v.accessible());
}

/// Variables sharing the same Ω_φ; the context in which maximality is judged.
class VariableFamily {
 public:
  VariableFamily() = default;
  VariableFamily(VariableSpace phi, std::vector<TheoreticalVariable> members)
      : phi_(std::move(phi)), members_(std::move(members)) {
    std::unordered_set<std::string> ids;
    for (const auto& m : members_) {
      if (!(m.domain() == phi_)) {
        throw DomainError("variable '" + m.id() + "' is not defined on '" + phi_.id() + "'");
      }
      if (!ids.insert(m.id()).second) {
        throw DomainError("duplicate variable id '" + m.id() + "'");
      }
    }
  }

  const VariableSpace& phi_space() const noexcept { return phi_; }
  const std::vector<TheoreticalVariable>& members() const noexcept { return members_; }

  const TheoreticalVariable* find(const std::string& id) const {
    for (const auto& m : members_) {
      if (m.id() == id) return &m;
    }
    return nullptr;
  }

 private:
  VariableSpace phi_;
  std::vector<TheoreticalVariable> members_;
};

inline void require_same_domain(const TheoreticalVariable& a, const TheoreticalVariable& b) {
  if (!(a.domain() == b.domain())) {
    throw DomainError("variables '" + a.id() + "' and '" + b.id() +
                      "' are defined on different spaces");
  }
}

/// a ≤ b: there is an f with a = f(b), i.e. b(φ1)=b(φ2) ⇒ a(φ1)=a(φ2).
inline bool is_function_of(const TheoreticalVariable& a, const TheoreticalVariable& b) {
  require_same_domain(a, b);
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> f(b.cardinality(), kUnset);
  for (std::size_t i = 0; i < a.codes().size(); ++i) {
    auto& slot = f[b.code(i)];
    if (slot == kUnset) {
      slot = a.code(i);
    } else if (slot != a.code(i)) {
      return false;
    }
  }
  return true;
}

inline bool is_bijective_correspondence(const TheoreticalVariable& a,
                                        const TheoreticalVariable& b) {
  return is_function_of(a, b) && is_function_of(b, a);
}

/// No accessible member of the family sits strictly above v.
inline bool is_maximal(const TheoreticalVariable& v, const VariableFamily& family) {
  if (!v.accessible()) {
    throw AccessibilityError("variable '" + v.id() + "' is inaccessible");
  }
  for (const auto& w : family.members()) {
    if (!w.accessible()) continue;
    if (is_function_of(v, w) && !is_function_of(w, v)) return false;
  }
  return true;
}

/// Some maximal accessible member w of the family with v ≤ w, if any.
inline std::optional<TheoreticalVariable> maximal_cover(const TheoreticalVariable& v,
                                                        const VariableFamily& family) {
  for (const auto& w : family.members()) {
    if (!w.accessible()) continue;
    if (is_function_of(v, w) && is_maximal(w, family)) return w;
  }
  return std::nullopt;
}

}  // namespace qrecon
