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
 * L²(Ω, μ) over a finite space and the regular representation
 * U(g)f(θ) = f(g⁻¹θ) of a transitive, free permutation group.
 *
 * Vectors are stored in the point basis of Ω in its stored ordering; the
 * weights of μ live in the inner product, not in the coordinates.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qrecon/errors.hpp"
#include "qrecon/groups.hpp"
#include "qrecon/linalg.hpp"
#include "qrecon/variables.hpp"

namespace qrecon {

class FunctionSpace {
 public:
  FunctionSpace() = default;
  FunctionSpace(VariableSpace base, InvariantMeasure measure,
                std::optional<TheoreticalVariable> coordinate = std::nullopt)
      : base_(std::move(base)), measure_(std::move(measure)), coordinate_(std::move(coordinate)) {
    if (!(measure_.space == base_) || measure_.weights.size() != base_.size()) {
      throw DomainError("measure is not defined on '" + base_.id() + "'");
    }
    for (double w : measure_.weights) {
      if (!(w > 0.0) || !std::isfinite(w)) {
        throw DomainError("measure on '" + base_.id() + "' must have positive finite weights");
      }
    }
    if (coordinate_) {
      if (coordinate_->value_set() != base_.points()) {
        throw DomainError("coordinate '" + coordinate_->id() + "' does not enumerate '" +
                          base_.id() + "'");
      }
    }
  }

  /// L²(Ω_θ) with counting measure, where Ω_θ is the value set of θ and θ
  /// is remembered as the coordinate linking the basis back to Ω_φ.
  static FunctionSpace over_variable(const TheoreticalVariable& theta) {
    VariableSpace base("Omega_" + theta.id(), theta.value_set());
    InvariantMeasure mu{base, std::vector<double>(base.size(), 1.0), 1};
    return FunctionSpace(std::move(base), std::move(mu), theta);
  }

  const VariableSpace& base() const noexcept { return base_; }
  const InvariantMeasure& measure() const noexcept { return measure_; }
  const std::optional<TheoreticalVariable>& coordinate() const noexcept { return coordinate_; }
  std::size_t dimension() const noexcept { return base_.size(); }

  /// Diagonal metric diag(μ).
  Matrix metric() const {
    Matrix w = Matrix::Zero(static_cast<Eigen::Index>(dimension()),
                            static_cast<Eigen::Index>(dimension()));
    for (std::size_t i = 0; i < dimension(); ++i) {
      w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = measure_.weights[i];
    }
    return w;
  }

  /// <f1, f2> = Σ conj(f1(θ)) f2(θ) μ(θ)
  Complex inner(const Vector& f1, const Vector& f2) const {
    check(f1);
    check(f2);
    Complex acc = 0.0;
    for (Eigen::Index i = 0; i < f1.size(); ++i) {
      acc += std::conj(f1(i)) * f2(i) * measure_.weights[static_cast<std::size_t>(i)];
    }
    return acc;
  }

  double norm(const Vector& f) const { return std::sqrt(inner(f, f).real()); }

 private:
  void check(const Vector& f) const {
    if (static_cast<std::size_t>(f.size()) != dimension()) {
      throw DimensionError("vector of size " + std::to_string(f.size()) +
                           " in a space of dimension " + std::to_string(dimension()));
    }
  }

  VariableSpace base_;
  InvariantMeasure measure_;
  std::optional<TheoreticalVariable> coordinate_;
};

struct RepresentationMatrix {
  std::size_t element = 0;
  Matrix matrix;
};

/// g -> U(g), indexed like group.elements().
struct Representation {
  GroupAction group;
  InvariantMeasure measure;
  std::vector<RepresentationMatrix> matrices;

  const Matrix& operator()(std::size_t element) const { return matrices.at(element).matrix; }
  std::size_t dimension() const { return group.space().size(); }
};

inline Representation build_representation(const GroupAction& g, const InvariantMeasure& mu) {
  require_group(g);
  if (!is_transitive(g)) {
    throw PostulateViolation("group '" + g.id() + "' is not transitive");
  }
  if (!isotropy_trivial(g)) {
    throw PostulateViolation("group '" + g.id() + "' has a non-trivial isotropy group");
  }
  if (!(mu.space == g.space()) || !mu.is_invariant_under(g)) {
    throw PostulateViolation("measure is not invariant under '" + g.id() + "'");
  }
  Representation rep{g, mu, {}};
  rep.matrices.reserve(g.order());
  for (std::size_t i = 0; i < g.order(); ++i) {
    // U e_θ = e_{gθ}, hence (U f)(θ') = f(g⁻¹θ').
    rep.matrices.push_back({i, permutation_matrix(g.element(i).image())});
  }
  return rep;
}

struct CoherentFamily {
  Vector seed;
  /// members[i] = U(g_i) seed.
  std::vector<Vector> members;

  /// Smallest ‖f_g − f_h‖ over g ≠ h; +inf for a single member.
  double min_separation() const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        best = std::min(best, (members[a] - members[b]).norm());
      }
    }
    return best;
  }
};

/// Values of `seed` are pairwise distinct beyond the exact tolerance.
inline bool is_injective(const Vector& seed) {
  for (Eigen::Index a = 0; a < seed.size(); ++a) {
    for (Eigen::Index b = a + 1; b < seed.size(); ++b) {
      if (std::abs(seed(a) - seed(b)) <= tol::kExact) return false;
    }
  }
  return true;
}

inline CoherentFamily coherent_family(const Representation& rep, const Vector& seed) {
  if (static_cast<std::size_t>(seed.size()) != rep.dimension()) {
    throw DimensionError("seed has size " + std::to_string(seed.size()) + ", expected " +
                         std::to_string(rep.dimension()));
  }
  if (!is_injective(seed)) {
    throw SeedError("seed is not a bijective function of the base point");
  }
  CoherentFamily fam{seed, {}};
  fam.members.reserve(rep.matrices.size());
  for (const auto& m : rep.matrices) fam.members.push_back(m.matrix * seed);
  return fam;
}

/// Seed f0(θ_i) = i + 1.
inline Vector index_seed(std::size_t n) {
  Vector v(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) v(static_cast<Eigen::Index>(i)) = double(i + 1);
  return v;
}

struct LemmaCheck {
  bool passed = false;
  double defect = 0.0;
};

struct LemmaReport {
  LemmaCheck norm_preservation;  // h stays in L² with the same norm
  LemmaCheck homomorphism;       // U(g1)U(g2) = U(g1 g2)
  LemmaCheck unitarity;          // U(g)† W U(g) = W
  LemmaCheck injectivity;        // g -> U(g) f0 is one-to-one
  std::size_t distinct_coherent = 0;

  bool all_passed() const {
    return norm_preservation.passed && homomorphism.passed && unitarity.passed &&
           injectivity.passed;
  }
};

/// Runs the four representation checks on `rep` as given (matrices are not
/// rebuilt, so a tampered representation is reported as such).
inline LemmaReport verify_lemmas(const Representation& rep,
                                 std::optional<Vector> seed = std::nullopt,
                                 double tolerance = tol::kExact) {
  LemmaReport r;
  const auto n = static_cast<Eigen::Index>(rep.dimension());
  const auto& w = rep.measure.weights;
  Matrix metric = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) metric(i, i) = w[static_cast<std::size_t>(i)];

  auto weighted_norm = [&](const Vector& v) {
    return std::sqrt((v.adjoint() * metric * v)(0, 0).real());
  };

  double d1 = 0.0;
  for (const auto& m : rep.matrices) {
    for (Eigen::Index i = 0; i < n; ++i) {
      Vector e = Vector::Zero(n);
      e(i) = 1.0;
      d1 = std::max(d1, std::abs(weighted_norm(m.matrix * e) - weighted_norm(e)));
    }
  }
  r.norm_preservation = {d1 <= tolerance, d1};

  double d2 = 0.0;
  bool closed = true;
  for (std::size_t a = 0; a < rep.matrices.size(); ++a) {
    for (std::size_t b = 0; b < rep.matrices.size(); ++b) {
      auto ab = rep.group.index_of(rep.group.element(a) * rep.group.element(b));
      if (!ab) {
        closed = false;
        continue;
      }
      d2 = std::max(d2, (rep(a) * rep(b) - rep(*ab)).norm());
    }
  }
  r.homomorphism = {closed && d2 <= tolerance, d2};

  double d3 = 0.0;
  for (const auto& m : rep.matrices) {
    d3 = std::max(d3, (m.matrix.adjoint() * metric * m.matrix - metric).norm());
  }
  r.unitarity = {d3 <= tolerance, d3};

  const Vector f0 = seed ? *seed : index_seed(rep.dimension());
  if (is_injective(f0)) {
    auto fam = coherent_family(rep, f0);
    const double sep = fam.min_separation();
    std::size_t distinct = 0;
    for (std::size_t a = 0; a < fam.members.size(); ++a) {
      bool unique = true;
      for (std::size_t b = 0; b < a; ++b) {
        if ((fam.members[a] - fam.members[b]).norm() <= tolerance) unique = false;
      }
      distinct += unique ? 1 : 0;
    }
    r.distinct_coherent = distinct;
    r.injectivity = {distinct == rep.matrices.size(), std::isinf(sep) ? 0.0 : sep};
  }
  return r;
}

}  // namespace qrecon
