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
 * Dense complex linear algebra shared by every module: matrix aliases,
 * tolerance constants and a handful of small helpers on top of Eigen.
 */

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "qrecon/errors.hpp"

namespace qrecon {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace tol {
/// Matrices that are exactly representable (permutations, 0/1 projectors).
inline constexpr double kExact = 1e-12;
/// Anything that went through an eigensolver.
inline constexpr double kSpectral = 1e-9;
/// Relative eigenvalue gap below which two eigenvalues count as degenerate.
inline constexpr double kDegeneracyRelative = 1e-7;
/// Probability identities (stochasticity, POVM completeness, marginals).
inline constexpr double kProbability = 1e-10;
}  // namespace tol

inline double frobenius(const Matrix& m) { return m.norm(); }

inline double hermiticity_defect(const Matrix& m) {
  return (m - m.adjoint()).norm();
}

inline void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionError(std::string(what) + " must be a non-empty square matrix");
  }
}

inline void require_same_dimension(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("dimension mismatch: " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                         "x" + std::to_string(b.cols()));
  }
}

/// Kronecker product a ⊗ b.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

/// |v><v|
inline Matrix outer(const Vector& v) { return v * v.adjoint(); }

/// Permutation matrix P with P e_i = e_{image[i]}.
inline Matrix permutation_matrix(std::span<const std::size_t> image) {
  const auto n = static_cast<Eigen::Index>(image.size());
  Matrix p = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    p(static_cast<Eigen::Index>(image[static_cast<std::size_t>(i)]), i) = 1.0;
  }
  return p;
}

inline double unitarity_defect(const Matrix& u) {
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).norm();
}

/// Pauli matrices, used by the bundled setups and by tests.
namespace pauli {
inline Matrix x() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  return m;
}
inline Matrix y() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = Complex(0, -1);
  m(1, 0) = Complex(0, 1);
  return m;
}
inline Matrix z() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}
}  // namespace pauli

}  // namespace qrecon
