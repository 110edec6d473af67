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
 * Deciding whether two accessible variables are related through a single
 * transformation k of Ω_φ, η(φ) = θ(k·φ), or through a bijective relabelling
 * ξ of η with ξ(φ) = θ(k·φ).
 */

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qrecon/errors.hpp"
#include "qrecon/groups.hpp"
#include "qrecon/variables.hpp"

namespace qrecon {

enum class RelationStatus { OneToOne, Related, RelatedViaSurrogate, Unrelated };

inline const char* to_string(RelationStatus s) {
  switch (s) {
    case RelationStatus::OneToOne: return "OneToOne";
    case RelationStatus::Related: return "Related";
    case RelationStatus::RelatedViaSurrogate: return "RelatedViaSurrogate";
    case RelationStatus::Unrelated: return "Unrelated";
  }
  return "?";
}

struct RelatednessResult {
  RelationStatus status = RelationStatus::Unrelated;
  /// Index into M.elements() of the first witness k.
  std::optional<std::size_t> witness;
  /// ξ = σ∘η, present only for RelatedViaSurrogate.
  std::optional<TheoreticalVariable> surrogate;
  /// Number of elements of M that are witnesses of the reported kind.
  std::size_t witness_count = 0;
};

/// θ∘k as a variable on the same space.
inline TheoreticalVariable pull_back(const TheoreticalVariable& theta, const Permutation& k,
                                     std::string id) {
  std::vector<std::string> vals(theta.domain().size());
  for (std::size_t p = 0; p < vals.size(); ++p) vals[p] = theta.at(k(p));
  return TheoreticalVariable(std::move(id), theta.domain(), std::move(vals),
                             theta.accessible());
}

namespace detail {
inline bool holds_pointwise(const TheoreticalVariable& theta, const TheoreticalVariable& eta,
                            const Permutation& k) {
  for (std::size_t p = 0; p < theta.domain().size(); ++p) {
    if (eta.at(p) != theta.at(k(p))) return false;
  }
  return true;
}

inline void require_acts_on(const GroupAction& m, const TheoreticalVariable& v) {
  if (!(m.space() == v.domain())) {
    throw DomainError("group '" + m.id() + "' does not act on the domain of '" + v.id() + "'");
  }
}
}  // namespace detail

/// η(φ) = θ(k·φ) for every φ. `k` must be an element of M.
inline bool check_relation(const TheoreticalVariable& theta, const TheoreticalVariable& eta,
                           const GroupAction& m, const Permutation& k) {
  require_same_domain(theta, eta);
  detail::require_acts_on(m, theta);
  if (!m.contains(k)) {
    throw GroupMembershipError("transformation " + k.cycles() + " is not an element of '" +
                               m.id() + "'");
  }
  return detail::holds_pointwise(theta, eta, k);
}

/// Indices of every k in M with η = θ∘k, in element order.
inline std::vector<std::size_t> relation_witnesses(const TheoreticalVariable& theta,
                                                   const TheoreticalVariable& eta,
                                                   const GroupAction& m) {
  require_same_domain(theta, eta);
  detail::require_acts_on(m, theta);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < m.order(); ++i) {
    if (detail::holds_pointwise(theta, eta, m.element(i))) out.push_back(i);
  }
  return out;
}

/// Classifies the pair (θ, η) under M. Order of preference: OneToOne, then
/// Related with the first k in element order, then a surrogate ξ = θ∘k
/// bijective to η, else Unrelated.
inline RelatednessResult find_relation(const TheoreticalVariable& theta,
                                       const TheoreticalVariable& eta, const GroupAction& m) {
  require_same_domain(theta, eta);
  detail::require_acts_on(m, theta);
  if (theta.cardinality() != eta.cardinality()) {
    throw CategoryError("'" + theta.id() + "' takes " + std::to_string(theta.cardinality()) +
                        " values but '" + eta.id() + "' takes " +
                        std::to_string(eta.cardinality()));
  }
  RelatednessResult r;
  if (is_bijective_correspondence(theta, eta)) {
    r.status = RelationStatus::OneToOne;
    return r;
  }
  auto direct = relation_witnesses(theta, eta, m);
  if (!direct.empty()) {
    r.status = RelationStatus::Related;
    r.witness = direct.front();
    r.witness_count = direct.size();
    return r;
  }
  // σ∘η = θ∘k for some bijection σ iff θ∘k and η induce the same partition.
  for (std::size_t i = 0; i < m.order(); ++i) {
    auto xi = pull_back(theta, m.element(i), eta.id() + "~");
    if (!is_bijective_correspondence(xi, eta)) continue;
    if (!r.witness) {
      r.witness = i;
      r.surrogate = std::move(xi);
    }
    ++r.witness_count;
  }
  r.status = r.witness ? RelationStatus::RelatedViaSurrogate : RelationStatus::Unrelated;
  return r;
}

}  // namespace qrecon
