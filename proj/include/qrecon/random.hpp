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
 * Seeded random states, unitaries and amplitudes for property sweeps.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "qrecon/linalg.hpp"
#include "qrecon/probability.hpp"

namespace qrecon {

class Rng {
 public:
  explicit Rng(std::uint64_t seed = 1) : engine_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  Complex complex_normal() { return {normal(), normal()}; }

  /// Uniform on the closed unit disc.
  Complex unit_disc() {
    const double r = std::sqrt(uniform());
    const double t = uniform(0.0, 2.0 * std::acos(-1.0));
    return std::polar(r, t);
  }

  /// Haar-random pure state.
  StateVector state(std::size_t d) {
    Vector v(static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = complex_normal();
    return StateVector::normalized(v);
  }

  /// Haar-random unitary (QR of a Ginibre matrix with the phases of R removed).
  Matrix unitary(std::size_t d) {
    const auto n = static_cast<Eigen::Index>(d);
    Matrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) g(i, j) = complex_normal();
    }
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR();
    for (Eigen::Index j = 0; j < n; ++j) {
      const Complex rj = r(j, j);
      if (std::abs(rj) > 0.0) q.col(j) *= rj / std::abs(rj);
    }
    return q;
  }

  /// Mixed state ρ = G G† / trace, G Ginibre.
  DensityOperator density(std::size_t d) {
    const auto n = static_cast<Eigen::Index>(d);
    Matrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) g(i, j) = complex_normal();
    }
    Matrix rho = g * g.adjoint();
    rho /= rho.trace();
    return DensityOperator(0.5 * (rho + rho.adjoint()));
  }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qrecon
