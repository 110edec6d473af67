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
 * Quantum probabilities: conditional Born probabilities between two
 * eigenbases, trace-rule expectations, effects built from a statistical
 * likelihood, proportional-likelihood equivalence, linear-inversion
 * coherence of probability assignments, and product amplitudes.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qrecon/errors.hpp"
#include "qrecon/linalg.hpp"
#include "qrecon/operators.hpp"

namespace qrecon {

/// Unit vector (‖v‖ = 1 within 1e-12).
class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(Vector amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.size() == 0 || std::abs(amps_.norm() - 1.0) > tol::kExact) {
      throw StateError("state vector is not normalized (norm " + std::to_string(amps_.norm()) +
                       ")");
    }
  }

  static StateVector normalized(const Vector& v) {
    const double n = v.norm();
    if (!(n > 0.0)) throw StateError("cannot normalize the zero vector");
    return StateVector(v / n);
  }

  static StateVector basis(std::size_t dim, std::size_t index) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return StateVector(std::move(v));
  }

  const Vector& amplitudes() const noexcept { return amps_; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(amps_.size()); }

  friend bool operator==(const StateVector& a, const StateVector& b) {
    return a.amps_.size() == b.amps_.size() && a.amps_ == b.amps_;
  }

 private:
  Vector amps_;
};

using Basis = std::vector<StateVector>;

inline Matrix basis_matrix(const Basis& basis) {
  if (basis.empty()) throw BasisError("empty basis");
  const auto d = static_cast<Eigen::Index>(basis.front().dimension());
  Matrix m(d, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j) {
    if (basis[j].dimension() != basis.front().dimension()) {
      throw BasisError("basis vectors have different dimensions");
    }
    m.col(static_cast<Eigen::Index>(j)) = basis[j].amplitudes();
  }
  return m;
}

inline Basis basis_from_columns(const Matrix& m) {
  Basis out;
  for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(StateVector::normalized(m.col(j)));
  return out;
}

inline void require_orthonormal(const Basis& basis) {
  const Matrix m = basis_matrix(basis);
  if (m.rows() != m.cols()) {
    throw BasisError("basis has " + std::to_string(m.cols()) + " vectors in dimension " +
                     std::to_string(m.rows()));
  }
  if (unitarity_defect(m) > tol::kProbability) {
    throw BasisError("basis is not orthonormal");
  }
}

/// Hermitian, unit trace, positive semidefinite.
class DensityOperator {
 public:
  DensityOperator() = default;
  explicit DensityOperator(Matrix m, double psd_tolerance = tol::kProbability)
      : m_(std::move(m)) {
    require_square(m_, "density operator");
    if (hermiticity_defect(m_) > tol::kExact) throw StateError("density operator is not Hermitian");
    if (std::abs(m_.trace() - Complex(1.0)) > tol::kExact) {
      throw StateError("density operator trace is " + std::to_string(m_.trace().real()));
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < -psd_tolerance) {
      throw StateError("density operator has eigenvalue " + std::to_string(es.eigenvalues()(0)));
    }
  }

  static DensityOperator pure(const StateVector& s) { return DensityOperator(outer(s.amplitudes())); }
  static DensityOperator maximally_mixed(std::size_t d) {
    const auto n = static_cast<Eigen::Index>(d);
    return DensityOperator(Matrix::Identity(n, n) / double(d));
  }

  const Matrix& matrix() const noexcept { return m_; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(m_.rows()); }

 private:
  Matrix m_;
};

/// Hermitian with spectrum in [0, 1] (within 1e-10).
class Effect {
 public:
  Effect() = default;
  explicit Effect(Matrix m) : m_(std::move(m)) {
    require_square(m_, "effect");
    if (hermiticity_defect(m_) > tol::kExact) throw ModelError("effect is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    if (ev(0) < -tol::kProbability || ev(ev.size() - 1) > 1.0 + tol::kProbability) {
      throw ModelError("effect spectrum [" + std::to_string(ev(0)) + ", " +
                       std::to_string(ev(ev.size() - 1)) + "] leaves [0, 1]");
    }
  }

  const Matrix& matrix() const noexcept { return m_; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(m_.rows()); }

 private:
  Matrix m_;
};

/// P(θ^b = v_j | θ^a = u_k) = |<a;k|b;j>|².
inline double born_conditional(const Basis& a, const Basis& b, std::size_t k, std::size_t j) {
  require_orthonormal(a);
  require_orthonormal(b);
  if (a.front().dimension() != b.front().dimension()) {
    throw BasisError("bases live in different dimensions");
  }
  if (k >= a.size() || j >= b.size()) throw BasisError("basis index out of range");
  return std::norm(a[k].amplitudes().dot(b[j].amplitudes()));
}

/// Matrix of all conditional probabilities, rows indexed by k.
inline Eigen::MatrixXd born_matrix(const Basis& a, const Basis& b) {
  require_orthonormal(a);
  require_orthonormal(b);
  if (a.front().dimension() != b.front().dimension()) {
    throw BasisError("bases live in different dimensions");
  }
  const Matrix overlap = basis_matrix(a).adjoint() * basis_matrix(b);
  return overlap.cwiseAbs2();
}

/// trace(ρ A).
inline double expectation(const DensityOperator& rho, const HermitianOperator& a) {
  require_same_dimension(rho.matrix(), a.matrix());
  return (rho.matrix() * a.matrix()).trace().real();
}

/// p(z | θ = v_j), stored as probabilities(z, j); columns sum to one.
struct LikelihoodModel {
  std::string id;
  std::vector<std::string> values;
  std::vector<std::string> data;
  Eigen::MatrixXd probabilities;
  /// Opaque experimental context label.
  std::string context;

  void validate() const {
    if (values.empty() || data.empty()) throw ModelError("model '" + id + "' is empty");
    if (probabilities.rows() != Eigen::Index(data.size()) ||
        probabilities.cols() != Eigen::Index(values.size())) {
      throw ModelError("model '" + id + "' probability table has the wrong shape");
    }
    for (Eigen::Index j = 0; j < probabilities.cols(); ++j) {
      for (Eigen::Index z = 0; z < probabilities.rows(); ++z) {
        const double p = probabilities(z, j);
        if (!(p >= 0.0 && p <= 1.0)) {
          throw ModelError("model '" + id + "' has probability " + std::to_string(p) +
                           " outside [0, 1]");
        }
      }
      if (std::abs(probabilities.col(j).sum() - 1.0) > tol::kExact) {
        throw ModelError("model '" + id + "' likelihood for value '" +
                         values[static_cast<std::size_t>(j)] + "' does not sum to one");
      }
    }
  }

  std::size_t data_index(const std::string& z) const {
    auto it = std::find(data.begin(), data.end(), z);
    if (it == data.end()) throw ModelError("model '" + id + "' has no data point '" + z + "'");
    return static_cast<std::size_t>(it - data.begin());
  }

  friend bool operator==(const LikelihoodModel& a, const LikelihoodModel& b) {
    return a.id == b.id && a.values == b.values && a.data == b.data &&
           a.probabilities.rows() == b.probabilities.rows() &&
           a.probabilities.cols() == b.probabilities.cols() &&
           a.probabilities == b.probabilities && a.context == b.context;
  }
};

/// F(z) = Σ_j p(z | v_j) |b;j><b;j|.
inline Effect likelihood_effect(const LikelihoodModel& model, std::size_t z, const Basis& b) {
  model.validate();
  if (b.size() != model.values.size()) {
    throw ModelError("model '" + model.id + "' has " + std::to_string(model.values.size()) +
                     " values but the basis has " + std::to_string(b.size()) + " vectors");
  }
  require_orthonormal(b);
  if (z >= model.data.size()) throw ModelError("data index out of range");
  const auto d = static_cast<Eigen::Index>(b.front().dimension());
  Matrix f = Matrix::Zero(d, d);
  for (std::size_t j = 0; j < b.size(); ++j) {
    f += model.probabilities(Eigen::Index(z), Eigen::Index(j)) * outer(b[j].amplitudes());
  }
  return Effect(0.5 * (f + f.adjoint()));
}

inline Effect likelihood_effect(const LikelihoodModel& model, const std::string& z,
                                const Basis& b) {
  return likelihood_effect(model, model.data_index(z), b);
}

inline std::vector<Effect> likelihood_povm(const LikelihoodModel& model, const Basis& b) {
  std::vector<Effect> out;
  for (std::size_t z = 0; z < model.data.size(); ++z) out.push_back(likelihood_effect(model, z, b));
  return out;
}

/// ‖Σ_z F(z) − I‖_F.
inline double povm_completeness_defect(const std::vector<Effect>& effects) {
  if (effects.empty()) return std::numeric_limits<double>::infinity();
  const auto d = static_cast<Eigen::Index>(effects.front().dimension());
  Matrix sum = Matrix::Zero(d, d);
  for (const auto& f : effects) {
    require_same_dimension(sum, f.matrix());
    sum += f.matrix();
  }
  return (sum - Matrix::Identity(d, d)).norm();
}

/// F1 = c F2 for some c > 0 (within 1e-9): the same evidence class.
inline bool evidence_equivalent(const Effect& f1, const Effect& f2) {
  require_same_dimension(f1.matrix(), f2.matrix());
  if (f1.matrix().norm() <= tol::kExact || f2.matrix().norm() <= tol::kExact) {
    throw DegenerateEffectError("zero effect carries no evidence");
  }
  const double c = (f2.matrix().adjoint() * f1.matrix()).trace().real() /
                   f2.matrix().squaredNorm();
  return c > 0.0 && (f1.matrix() - c * f2.matrix()).norm() <= tol::kSpectral;
}

/// Hilbert–Schmidt orthonormal basis of traceless Hermitian d×d matrices
/// (generalized Gell-Mann matrices), d² − 1 of them.
inline std::vector<Matrix> traceless_hermitian_basis(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  std::vector<Matrix> out;
  const double r2 = std::sqrt(2.0);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = j + 1; k < d; ++k) {
      Matrix s = Matrix::Zero(d, d);
      s(j, k) = s(k, j) = 1.0 / r2;
      out.push_back(s);
      Matrix a = Matrix::Zero(d, d);
      a(j, k) = Complex(0, -1.0 / r2);
      a(k, j) = Complex(0, 1.0 / r2);
      out.push_back(a);
    }
  }
  for (Eigen::Index l = 1; l < d; ++l) {
    Matrix g = Matrix::Zero(d, d);
    const double s = 1.0 / std::sqrt(double(l * (l + 1)));
    for (Eigen::Index m = 0; m < l; ++m) g(m, m) = s;
    g(l, l) = -double(l) * s;
    out.push_back(g);
  }
  return out;
}

struct CoherenceFit {
  /// Present iff the assignment is coherent.
  std::optional<DensityOperator> rho;
  /// Least-squares unit-trace Hermitian solution, always filled.
  Matrix fitted;
  /// ‖(trace(ρ̂ F_i) − p_i)_i‖₂
  double residual = 0.0;
  double min_eigenvalue = 0.0;
  bool coherent = false;
};

namespace coherence {
inline constexpr double kResidual = 1e-6;
inline constexpr double kNegativity = 1e-8;
}  // namespace coherence

/// Fits a single density operator to probability assignments on effects by
/// least squares over unit-trace Hermitian matrices. The assignment is
/// coherent when the fit is exact (residual ≤ 1e-6) and positive
/// (smallest eigenvalue ≥ −1e-8).
inline CoherenceFit coherence_fit(const std::vector<std::pair<Effect, double>>& assignments) {
  if (assignments.empty()) throw CompletenessError("no assignments");
  const std::size_t dim = assignments.front().first.dimension();
  const auto d = static_cast<Eigen::Index>(dim);
  const auto n = static_cast<Eigen::Index>(assignments.size());
  for (const auto& [f, p] : assignments) {
    if (f.dimension() != dim) throw DimensionError("effects have different dimensions");
  }
  if (assignments.size() < dim * dim) {
    throw CompletenessError(std::to_string(assignments.size()) + " effects cannot determine a " +
                            std::to_string(dim) + "-dimensional state (need " +
                            std::to_string(dim * dim) + ")");
  }
  auto traceless = traceless_hermitian_basis(dim);
  const auto t = static_cast<Eigen::Index>(traceless.size());

  // Columns: identity/√d followed by the traceless basis.
  Eigen::MatrixXd full(n, t + 1);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Matrix& f = assignments[std::size_t(i)].first.matrix();
    full(i, 0) = f.trace().real() / std::sqrt(double(dim));
    for (Eigen::Index b = 0; b < t; ++b) {
      full(i, b + 1) = (traceless[std::size_t(b)] * f).trace().real();
    }
    rhs(i) = assignments[std::size_t(i)].second - f.trace().real() / double(dim);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> rank_qr(full);
  rank_qr.setThreshold(1e-10);
  if (rank_qr.rank() < t + 1) {
    throw CompletenessError("effects span only " + std::to_string(rank_qr.rank()) + " of " +
                            std::to_string(t + 1) + " operator directions");
  }
  const Eigen::MatrixXd system = full.rightCols(t);
  const Eigen::VectorXd y = system.colPivHouseholderQr().solve(rhs);

  CoherenceFit fit;
  fit.fitted = Matrix::Identity(d, d) / double(dim);
  for (Eigen::Index b = 0; b < t; ++b) fit.fitted += y(b) * traceless[std::size_t(b)];
  fit.fitted = 0.5 * (fit.fitted + fit.fitted.adjoint()).eval();
  fit.residual = (system * y - rhs).norm();
  Eigen::SelfAdjointEigenSolver<Matrix> es(fit.fitted, Eigen::EigenvaluesOnly);
  fit.min_eigenvalue = es.eigenvalues()(0);
  fit.coherent = fit.residual <= coherence::kResidual && fit.min_eigenvalue >= -coherence::kNegativity;
  if (fit.coherent) fit.rho = DensityOperator(fit.fitted, coherence::kNegativity);
  return fit;
}

struct ProductAmplitude {
  Complex amplitude;
  double probability = 0.0;
};

/// Independent events in H1 ⊗ H2: amplitude c1 c2, probability |c1 c2|².
/// Both moduli are expected to be at most one.
inline ProductAmplitude compose_independent(Complex c1, Complex c2) {
  const Complex c = c1 * c2;
  return {c, std::norm(c)};
}

}  // namespace qrecon
