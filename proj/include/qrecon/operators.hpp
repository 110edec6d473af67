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
 * Hermitian operators attached to accessible variables, and the spectral
 * facts linking them: eigenvalues are the variable's values, maximality is
 * simplicity of the spectrum, related variables have unitarily similar
 * operators, complementary maximal variables do not commute.
 *
 * Everything is finite-dimensional, so every symmetric operator here is
 * self-adjoint.
 */

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qrecon/errors.hpp"
#include "qrecon/groups.hpp"
#include "qrecon/hilbert.hpp"
#include "qrecon/linalg.hpp"
#include "qrecon/relatedness.hpp"
#include "qrecon/variables.hpp"

namespace qrecon {

struct Eigenspace {
  double value = 0.0;
  /// Column indices into eigenvectors().
  std::vector<std::size_t> columns;
  std::optional<std::string> label;
};

/// Finite Hermitian matrix with its eigendecomposition computed once.
/// Eigenvalues ascend; each eigenvector's first non-negligible component is
/// real and positive.
class HermitianOperator {
 public:
  using ValueLabels = std::vector<std::pair<double, std::string>>;

  HermitianOperator() = default;
  explicit HermitianOperator(Matrix m, ValueLabels labels = {})
      : matrix_(std::move(m)), labels_(std::move(labels)) {
    require_square(matrix_, "operator");
    const double defect = hermiticity_defect(matrix_);
    if (defect > tol::kExact) {
      throw HermiticityError("‖A − A†‖_F = " + std::to_string(defect));
    }
    // Symmetrize away sub-tolerance asymmetry before the solver sees it.
    matrix_ = 0.5 * (matrix_ + matrix_.adjoint()).eval();
    if (is_diagonal(matrix_)) {
      // The solver rescales its input, which can perturb the last bit of
      // exact diagonal entries; read them off instead.
      diagonal_eigensystem();
    } else {
      Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_);
      if (solver.info() != Eigen::Success) {
        throw SpectrumError("eigendecomposition failed");
      }
      values_ = solver.eigenvalues();
      vectors_ = solver.eigenvectors();
    }
    for (Eigen::Index c = 0; c < vectors_.cols(); ++c) {
      for (Eigen::Index r = 0; r < vectors_.rows(); ++r) {
        const Complex z = vectors_(r, c);
        if (std::abs(z) > tol::kExact) {
          vectors_.col(c) *= std::conj(z) / std::abs(z);
          break;
        }
      }
    }
    const auto n = matrix_.rows();
    if ((vectors_.adjoint() * vectors_ - Matrix::Identity(n, n)).norm() > tol::kSpectral) {
      throw SpectrumError("eigenvectors are not orthonormal");
    }
    if ((vectors_ * values_.cast<Complex>().asDiagonal() * vectors_.adjoint() - matrix_).norm() >
        tol::kSpectral * std::max(1.0, matrix_.norm())) {
      throw SpectrumError("eigendecomposition does not reconstruct the operator");
    }
  }

  const Matrix& matrix() const noexcept { return matrix_; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  const RealVector& eigenvalues() const noexcept { return values_; }
  const Matrix& eigenvectors() const noexcept { return vectors_; }
  const ValueLabels& value_labels() const noexcept { return labels_; }

  /// Variable value carried by eigenvalue `lambda`, if labels are known.
  std::optional<std::string> label_of(double lambda) const {
    for (const auto& [v, l] : labels_) {
      if (std::abs(v - lambda) <= tol::kSpectral * std::max(1.0, std::abs(v))) return l;
    }
    return std::nullopt;
  }

  double spectral_range() const {
    return values_.size() == 0 ? 0.0 : values_(values_.size() - 1) - values_(0);
  }

  /// Eigenvalues grouped into clusters separated by more than the
  /// degeneracy threshold.
  std::vector<Eigenspace> eigenspaces() const {
    std::vector<Eigenspace> out;
    const double gap = tol::kDegeneracyRelative * spectral_range();
    for (Eigen::Index i = 0; i < values_.size(); ++i) {
      const auto col = static_cast<std::size_t>(i);
      if (!out.empty() && values_(i) - values_(i - 1) <= gap) {
        out.back().columns.push_back(col);
        continue;
      }
      out.push_back({values_(i), {col}, std::nullopt});
    }
    for (auto& es : out) {
      double mean = 0.0;
      for (auto c : es.columns) mean += values_(static_cast<Eigen::Index>(c));
      es.value = mean / double(es.columns.size());
      es.label = label_of(es.value);
    }
    return out;
  }

  Matrix projector(const Eigenspace& es) const {
    Matrix p = Matrix::Zero(matrix_.rows(), matrix_.cols());
    for (auto c : es.columns) p += outer(vectors_.col(static_cast<Eigen::Index>(c)));
    return p;
  }

 private:
  static bool is_diagonal(const Matrix& m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        if (r != c && m(r, c) != Complex(0.0, 0.0)) return false;
      }
    }
    return true;
  }

  /// Stable ascending sort of the diagonal with unit eigenvectors.
  void diagonal_eigensystem() {
    const auto n = matrix_.rows();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) order[std::size_t(i)] = i;
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      return matrix_(a, a).real() < matrix_(b, b).real();
    });
    values_.resize(n);
    vectors_ = Matrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto i = order[std::size_t(k)];
      values_(k) = matrix_(i, i).real();
      vectors_(i, k) = 1.0;
    }
  }

  Matrix matrix_;
  ValueLabels labels_;
  RealVector values_;
  Matrix vectors_;
};

/// Injective assignment of real numbers to a variable's value labels.
class NumericEmbedding {
 public:
  NumericEmbedding() = default;
  NumericEmbedding(std::string variable, std::map<std::string, double> values)
      : variable_(std::move(variable)), values_(std::move(values)) {
    std::map<double, std::string> seen;
    for (const auto& [label, x] : values_) {
      if (!std::isfinite(x)) {
        throw EmbeddingError("value '" + label + "' of '" + variable_ + "' is not finite");
      }
      auto [it, inserted] = seen.emplace(x, label);
      if (!inserted) {
        throw EmbeddingError("values '" + it->second + "' and '" + label + "' of '" +
                             variable_ + "' embed to the same number");
      }
    }
  }

  /// Labels parsed as numbers when they all are; otherwise 0, 1, 2, ... in
  /// order of first appearance.
  static NumericEmbedding natural(const TheoreticalVariable& v) {
    std::map<std::string, double> out;
    bool numeric = true;
    for (const auto& label : v.value_set()) {
      double x = 0.0;
      auto [ptr, ec] = std::from_chars(label.data(), label.data() + label.size(), x);
      if (ec != std::errc() || ptr != label.data() + label.size()) {
        numeric = false;
        break;
      }
      out[label] = x;
    }
    if (!numeric) {
      out.clear();
      for (std::size_t i = 0; i < v.value_set().size(); ++i) out[v.value_set()[i]] = double(i);
    }
    return NumericEmbedding(v.id(), std::move(out));
  }

  const std::string& variable() const noexcept { return variable_; }
  const std::map<std::string, double>& values() const noexcept { return values_; }

  double operator()(const std::string& label) const {
    auto it = values_.find(label);
    if (it == values_.end()) {
      throw EmbeddingError("value '" + label + "' of '" + variable_ + "' has no embedding");
    }
    return it->second;
  }

  friend bool operator==(const NumericEmbedding&, const NumericEmbedding&) = default;

 private:
  std::string variable_;
  std::map<std::string, double> values_;
};

struct SpectralTerm {
  std::string label;
  double value = 0.0;
  /// Basis indices spanning the eigenspace.
  std::vector<std::size_t> support;
  /// Exact 0/1 diagonal projector.
  Matrix projector;
};

/// A = Σ_j value_j P_j, with the exact spectral data of the construction.
struct BuiltOperator {
  HermitianOperator op;
  std::vector<SpectralTerm> terms;
};

/// Basis index -> label of `v`, for the basis of `space`. Throws
/// DomainError when v is not a function of the space's coordinate.
inline std::vector<std::string> labels_on_basis(const TheoreticalVariable& v,
                                                const FunctionSpace& space) {
  if (!space.coordinate()) {
    throw DomainError("space '" + space.base().id() + "' has no coordinate variable");
  }
  const auto& coord = *space.coordinate();
  require_same_domain(v, coord);
  if (!is_function_of(v, coord)) {
    throw DomainError("'" + v.id() + "' is not a function of '" + coord.id() + "'");
  }
  std::vector<std::string> out(space.dimension());
  for (std::size_t p = 0; p < coord.domain().size(); ++p) out[coord.code(p)] = v.at(p);
  return out;
}

/// Operator of an accessible variable v on L²(Ω_θ), θ the space's coordinate:
/// diagonal in the point basis, one projector per value of v.
inline BuiltOperator build_operator(const TheoreticalVariable& v, const NumericEmbedding& embed,
                                    const FunctionSpace& space) {
  if (!v.accessible()) {
    throw AccessibilityError("variable '" + v.id() + "' is inaccessible");
  }
  const auto labels = labels_on_basis(v, space);
  const auto n = static_cast<Eigen::Index>(space.dimension());

  std::vector<SpectralTerm> terms;
  for (const auto& value : v.value_set()) {
    SpectralTerm t{value, embed(value), {}, Matrix::Zero(n, n)};
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == value) {
        t.support.push_back(i);
        t.projector(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
      }
    }
    terms.push_back(std::move(t));
  }
  Matrix a = Matrix::Zero(n, n);
  HermitianOperator::ValueLabels vl;
  for (const auto& t : terms) {
    a += t.value * t.projector;
    vl.emplace_back(t.value, t.label);
  }
  return {HermitianOperator(std::move(a), std::move(vl)), std::move(terms)};
}

/// Σ_j values_j |b_j><b_j| for orthonormal columns b_j of `basis`.
inline HermitianOperator spectral_operator(const Matrix& basis, const std::vector<double>& values,
                                           const std::vector<std::string>& labels = {}) {
  require_square(basis, "basis");
  if (values.size() != static_cast<std::size_t>(basis.cols()) ||
      (!labels.empty() && labels.size() != values.size())) {
    throw DimensionError("one value (and label) per basis vector is required");
  }
  if (unitarity_defect(basis) > tol::kProbability) {
    throw BasisError("basis vectors are not orthonormal");
  }
  Matrix a = Matrix::Zero(basis.rows(), basis.cols());
  HermitianOperator::ValueLabels vl;
  for (std::size_t j = 0; j < values.size(); ++j) {
    a += values[j] * outer(basis.col(static_cast<Eigen::Index>(j)));
    if (!labels.empty()) vl.emplace_back(values[j], labels[j]);
  }
  return HermitianOperator(0.5 * (a + a.adjoint()), std::move(vl));
}

/// Eigenbasis of the cyclic shift on n points: column j is ω^{jθ}/√n.
inline Matrix fourier_basis(std::size_t n) {
  const auto d = static_cast<Eigen::Index>(n);
  Matrix f(d, d);
  const double two_pi = 2.0 * std::acos(-1.0);
  for (Eigen::Index t = 0; t < d; ++t) {
    for (Eigen::Index j = 0; j < d; ++j) {
      f(t, j) = std::polar(1.0 / std::sqrt(double(n)), two_pi * double(j * t) / double(n));
    }
  }
  return f;
}

/// All eigenvalues simple: consecutive gaps exceed 1e-7 of the spectral range.
inline bool maximality_spectral_check(const HermitianOperator& a) {
  const auto& ev = a.eigenvalues();
  if (ev.size() <= 1) return true;
  const double range = a.spectral_range();
  if (range <= 0.0) return false;
  for (Eigen::Index i = 1; i < ev.size(); ++i) {
    if (ev(i) - ev(i - 1) <= tol::kDegeneracyRelative * range) return false;
  }
  return true;
}

struct CommutatorResult {
  bool commutes = false;
  double norm = 0.0;
};

inline CommutatorResult commutator_check(const HermitianOperator& a, const HermitianOperator& b) {
  require_same_dimension(a.matrix(), b.matrix());
  const double n = (a.matrix() * b.matrix() - b.matrix() * a.matrix()).norm();
  return {n <= tol::kSpectral, n};
}

/// Unitary S(k) on the basis of `space` induced by k acting on Ω_φ:
/// S e_i = e_{σ(i)} with σ(coord(φ)) = coord(k·φ). Empty when k does not
/// respect the coordinate's partition (compression ill-defined).
inline std::optional<Matrix> induced_unitary(const Permutation& k, const FunctionSpace& space) {
  if (!space.coordinate()) return std::nullopt;
  const auto& coord = *space.coordinate();
  if (k.size() != coord.domain().size()) {
    throw DimensionError("transformation acts on " + std::to_string(k.size()) +
                         " points, coordinate domain has " +
                         std::to_string(coord.domain().size()));
  }
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> sigma(space.dimension(), kUnset);
  for (std::size_t p = 0; p < k.size(); ++p) {
    auto& slot = sigma[coord.code(p)];
    const auto target = coord.code(k(p));
    if (slot == kUnset) {
      slot = target;
    } else if (slot != target) {
      return std::nullopt;
    }
  }
  std::vector<bool> hit(sigma.size(), false);
  for (auto s : sigma) {
    if (hit[s]) return std::nullopt;
    hit[s] = true;
  }
  return permutation_matrix(sigma);
}

struct ConjugationResult {
  HermitianOperator op;
  /// max |λ_i − λ'_i| over the sorted spectra.
  double spectrum_defect = 0.0;
  /// max ‖P_λ − Π_η(label(λ))‖_F over eigenspaces of the result.
  double partition_defect = 0.0;
  bool spectrum_preserved = false;
  bool partition_matches = false;
};

/// S(k)† A^θ S(k), with the checks that it carries θ's spectrum and that
/// its eigenspaces are η's preimage cells.
inline ConjugationResult conjugate_by_relation(const HermitianOperator& a_theta,
                                               const TheoreticalVariable& theta,
                                               const TheoreticalVariable& eta,
                                               const GroupAction& m, const Permutation& k,
                                               const FunctionSpace& space) {
  if (!check_relation(theta, eta, m, k)) {
    throw RelationError("'" + eta.id() + "' is not '" + theta.id() + "' composed with " +
                        k.cycles());
  }
  auto s = induced_unitary(k, space);
  if (!s) {
    throw RelationError(k.cycles() + " induces no unitary on the basis of '" +
                        space.base().id() + "'");
  }
  ConjugationResult r{HermitianOperator(s->adjoint() * a_theta.matrix() * *s,
                                        a_theta.value_labels())};
  r.spectrum_defect = (r.op.eigenvalues() - a_theta.eigenvalues()).cwiseAbs().maxCoeff();
  r.spectrum_preserved = r.spectrum_defect <= tol::kSpectral;

  const auto eta_labels = labels_on_basis(eta, space);
  const auto n = static_cast<Eigen::Index>(space.dimension());
  auto cell_projector = [&](const std::string& label) {
    Matrix p = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < eta_labels.size(); ++i) {
      if (eta_labels[i] == label) p(Eigen::Index(i), Eigen::Index(i)) = 1.0;
    }
    return p;
  };
  const auto spaces = r.op.eigenspaces();
  bool matched = spaces.size() == eta.cardinality();
  double defect = 0.0;
  for (const auto& es : spaces) {
    const Matrix p = r.op.projector(es);
    double best = std::numeric_limits<double>::infinity();
    if (es.label) {
      best = (p - cell_projector(*es.label)).norm();
    } else {
      for (const auto& value : eta.value_set()) best = std::min(best, (p - cell_projector(value)).norm());
    }
    defect = std::max(defect, best);
  }
  r.partition_defect = defect;
  r.partition_matches = matched && defect <= tol::kSpectral;
  return r;
}

/// First k in M (element order) whose induced unitary W(k) satisfies
/// ‖A^η − W(k)† A^θ W(k)‖_F ≤ 1e-9.
inline std::optional<std::size_t> relation_from_conjugation(const HermitianOperator& a_theta,
                                                            const HermitianOperator& a_eta,
                                                            const GroupAction& m,
                                                            const FunctionSpace& space) {
  require_same_dimension(a_theta.matrix(), a_eta.matrix());
  for (std::size_t i = 0; i < m.order(); ++i) {
    auto w = induced_unitary(m.element(i), space);
    if (!w) continue;
    if ((a_eta.matrix() - w->adjoint() * a_theta.matrix() * *w).norm() <= tol::kSpectral) {
      return i;
    }
  }
  return std::nullopt;
}

}  // namespace qrecon
