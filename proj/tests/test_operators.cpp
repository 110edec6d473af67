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

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qrecon/operators.hpp"
#include "qrecon/random.hpp"

using namespace qrecon;

namespace {

VariableSpace four() { return VariableSpace::range("Omega_phi", 4); }
TheoreticalVariable theta() { return {"theta", four(), {"0", "1", "0", "1"}}; }
TheoreticalVariable eta() { return {"eta", four(), {"0", "0", "1", "1"}}; }
TheoreticalVariable phi() { return identity_variable(four(), "phi", true); }

Matrix diag(std::initializer_list<double> d) {
  Matrix m = Matrix::Zero(Eigen::Index(d.size()), Eigen::Index(d.size()));
  Eigen::Index i = 0;
  for (double x : d) m(i, i) = x, ++i;
  return m;
}

TEST(Operators, SigmaZForm) {
  auto space2 = VariableSpace::range("O", 2);
  TheoreticalVariable t("t", space2, {"0", "1"});
  auto fs = FunctionSpace::over_variable(t);
  auto built = build_operator(t, NumericEmbedding("t", {{"0", 1.0}, {"1", -1.0}}), fs);
  EXPECT_EQ(built.op.matrix(), diag({1, -1}));
  EXPECT_TRUE(maximality_spectral_check(built.op));
  EXPECT_EQ(built.op.label_of(-1.0), "1");
}

TEST(Operators, ConstantGivesDegenerateFiveTimesIdentity) {
  auto space2 = VariableSpace::range("O", 2);
  TheoreticalVariable t("t", space2, {"a", "b"});
  TheoreticalVariable c("c", space2, {"c", "c"});
  auto fs = FunctionSpace::over_variable(t);
  auto built = build_operator(c, NumericEmbedding("c", {{"c", 5.0}}), fs);
  EXPECT_EQ(built.op.matrix(), diag({5, 5}));
  const auto es = built.op.eigenspaces();
  ASSERT_EQ(es.size(), 1u);
  EXPECT_EQ(es[0].columns.size(), 2u);
  EXPECT_FALSE(maximality_spectral_check(built.op));
}

TEST(Operators, ParityPartitionAndResolutionOfIdentity) {
  auto fs = FunctionSpace::over_variable(phi());
  auto built = build_operator(theta(), NumericEmbedding::natural(theta()), fs);
  EXPECT_FALSE(maximality_spectral_check(built.op));
  ASSERT_EQ(built.terms.size(), 2u);
  Matrix sum = Matrix::Zero(4, 4);
  for (const auto& t : built.terms) {
    EXPECT_EQ(t.support.size(), 2u);
    sum += t.projector;
  }
  EXPECT_EQ(sum, Matrix::Identity(4, 4));
  EXPECT_EQ(built.terms[0].support, (std::vector<std::size_t>{0, 2}));
  for (const auto& es : built.op.eigenspaces()) {
    EXPECT_EQ(es.columns.size(), 2u);
    ASSERT_TRUE(es.label.has_value());
  }
}

TEST(Operators, MaximalityAgreesWithVariableOrder) {
  TheoreticalVariable psi("psi", four(), {"a", "b", "c", "d"});
  VariableFamily fam(four(), {theta(), eta(), psi});
  auto fs = FunctionSpace::over_variable(psi);
  for (const auto& v : fam.members()) {
    auto built = build_operator(v, NumericEmbedding::natural(v), fs);
    EXPECT_EQ(maximality_spectral_check(built.op), is_maximal(v, fam)) << v.id();
  }
}

TEST(Operators, ConstructionErrors) {
  auto fs = FunctionSpace::over_variable(theta());
  EXPECT_THROW(build_operator(eta(), NumericEmbedding::natural(eta()), fs), DomainError);
  EXPECT_THROW(NumericEmbedding("x", {{"a", 1.0}, {"b", 1.0}}), EmbeddingError);
  TheoreticalVariable hidden("h", four(), {"0", "1", "0", "1"}, false);
  EXPECT_THROW(build_operator(hidden, NumericEmbedding::natural(hidden), fs), AccessibilityError);
  Matrix nh(2, 2);
  nh << 0, 1, 0, 0;
  EXPECT_THROW(HermitianOperator{nh}, HermiticityError);
}

TEST(Operators, SigmaZSigmaXCommutator) {
  const auto r = commutator_check(HermitianOperator(pauli::z()), HermitianOperator(pauli::x()));
  EXPECT_FALSE(r.commutes);
  // [Z, X] = 2iY and ‖Y‖_F = √2.
  EXPECT_NEAR(r.norm, 2.0 * std::sqrt(2.0), tol::kSpectral);
}

TEST(Operators, SelfAndDiagonalCommute) {
  HermitianOperator a(pauli::x());
  const auto self = commutator_check(a, a);
  EXPECT_TRUE(self.commutes);
  EXPECT_EQ(self.norm, 0.0);
  EXPECT_TRUE(commutator_check(HermitianOperator(diag({1, 2, 3})), HermitianOperator(diag({3, -1, 0}))).commutes);
  EXPECT_THROW(commutator_check(a, HermitianOperator(diag({1, 2, 3}))), DimensionError);
}

TEST(Operators, ConjugationScenarioA) {
  auto m = GroupAction::symmetric("M", four());
  auto fs = FunctionSpace::over_variable(phi());
  auto a_theta = build_operator(theta(), NumericEmbedding::natural(theta()), fs).op;
  const auto k = *find_relation(theta(), eta(), m).witness;
  auto r = conjugate_by_relation(a_theta, theta(), eta(), m, m.element(k), fs);
  EXPECT_TRUE(r.spectrum_preserved);
  EXPECT_TRUE(r.partition_matches);
  auto a_eta = build_operator(eta(), NumericEmbedding::natural(eta()), fs).op;
  EXPECT_LE((r.op.matrix() - a_eta.matrix()).norm(), tol::kSpectral);
}

TEST(Operators, ConjugationByIdentity) {
  auto m = GroupAction::symmetric("M", four());
  auto fs = FunctionSpace::over_variable(phi());
  auto a = build_operator(theta(), NumericEmbedding::natural(theta()), fs).op;
  auto r = conjugate_by_relation(a, theta(), theta(), m, Permutation::identity(4), fs);
  EXPECT_EQ(r.op.matrix(), a.matrix());
  EXPECT_EQ(r.spectrum_defect, 0.0);
}

TEST(Operators, ConjugationRequiresRelation) {
  auto m = GroupAction::symmetric("M", four());
  auto fs = FunctionSpace::over_variable(phi());
  auto a = build_operator(theta(), NumericEmbedding::natural(theta()), fs).op;
  EXPECT_THROW(conjugate_by_relation(a, theta(), eta(), m, Permutation::identity(4), fs), RelationError);
}

TEST(Operators, RelationFromConjugationMatchesSearch) {
  auto m = GroupAction::symmetric("M", four());
  auto fs = FunctionSpace::over_variable(phi());
  auto a_theta = build_operator(theta(), NumericEmbedding::natural(theta()), fs).op;
  auto a_eta = build_operator(eta(), NumericEmbedding::natural(eta()), fs).op;
  const auto k = relation_from_conjugation(a_theta, a_eta, m, fs);
  ASSERT_TRUE(k.has_value());
  EXPECT_EQ(m.element(*k).cycles(), "(1 2)");
  EXPECT_EQ(k, find_relation(theta(), eta(), m).witness);
  EXPECT_EQ(relation_from_conjugation(a_theta, a_theta, m, fs), m.identity_index());

  auto z4 = GroupAction::cyclic("Z4", four());
  EXPECT_FALSE(relation_from_conjugation(a_theta, a_eta, z4, fs).has_value());
  EXPECT_EQ(find_relation(theta(), eta(), z4).status, RelationStatus::Unrelated);
}

TEST(Operators, InducedUnitaryUndefinedWhenPartitionBroken) {
  auto fs = FunctionSpace::over_variable(theta());
  EXPECT_FALSE(induced_unitary(Permutation::swap(4, 1, 2), fs).has_value());
  EXPECT_TRUE(induced_unitary(Permutation({1, 0, 3, 2}), fs).has_value());
}

TEST(Operators, EigenvectorPhaseConvention) {
  Rng rng(9);
  for (int t = 0; t < 20; ++t) {
    const Matrix u = rng.unitary(4);
    auto a = spectral_operator(u, {1, 2, 3, 4});
    const Matrix& v = a.eigenvectors();
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
      for (Eigen::Index r = 0; r < v.rows(); ++r) {
        if (std::abs(v(r, c)) > tol::kExact) {
          EXPECT_NEAR(v(r, c).imag(), 0.0, tol::kExact);
          EXPECT_GT(v(r, c).real(), 0.0);
          break;
        }
      }
    }
  }
}

// Maximal operators with unrelated eigenbases never commute; sharing an
// eigenbasis always does.
TEST(OperatorsProperty, MaximalOperatorsCommuteOnlyWithSharedBasis) {
  Rng rng(13);
  for (int t = 0; t < 200; ++t) {
    const std::size_t d = 2 + t % 5;
    std::vector<double> va(d), vb(d);
    for (std::size_t i = 0; i < d; ++i) va[i] = double(i), vb[i] = double(d - i) * 1.5;
    auto a = spectral_operator(rng.unitary(d), va);
    auto b = spectral_operator(rng.unitary(d), vb);
    ASSERT_TRUE(maximality_spectral_check(a));
    EXPECT_FALSE(commutator_check(a, b).commutes);
    auto c = spectral_operator(a.eigenvectors(), vb);
    EXPECT_TRUE(commutator_check(a, c).commutes);
  }
}

TEST(OperatorsProperty, FourierBasisDoesNotCommuteWithPointBasis) {
  for (std::size_t d = 2; d <= 8; ++d) {
    std::vector<double> v(d);
    for (std::size_t i = 0; i < d; ++i) v[i] = double(i);
    auto a = spectral_operator(Matrix::Identity(Eigen::Index(d), Eigen::Index(d)), v);
    auto b = spectral_operator(fourier_basis(d), v);
    EXPECT_FALSE(commutator_check(a, b).commutes);
    EXPECT_LE(unitarity_defect(fourier_basis(d)), tol::kExact * double(d));
  }
}

}  // namespace
