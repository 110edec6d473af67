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

#include "oracles.hpp"
#include "qrecon/hilbert.hpp"

using namespace qrecon;

namespace {

Representation regular(const GroupAction& g) { return build_representation(g, invariant_measure(g)); }

/// Left-multiplication action of `g` on its own elements.
GroupAction cayley(const GroupAction& g, const std::string& id) {
  VariableSpace space = VariableSpace::range(id + "_pts", g.order());
  std::vector<Permutation> elems;
  for (const auto& a : g.elements()) {
    std::vector<std::size_t> img(g.order());
    for (std::size_t i = 0; i < g.order(); ++i) img[i] = *g.index_of(a * g.element(i));
    elems.emplace_back(img);
  }
  return GroupAction(id, space, elems);
}

TEST(Hilbert, Z2SwapMatrix) {
  auto z2 = GroupAction::cyclic("Z2", VariableSpace::range("O", 2));
  auto rep = regular(z2);
  Matrix expect(2, 2);
  expect << 0, 1, 1, 0;
  EXPECT_EQ(rep(1), expect);
  EXPECT_TRUE(verify_lemmas(rep, index_seed(2)).all_passed());
}

TEST(Hilbert, Z4ShiftHasOrderFour) {
  auto rep = regular(GroupAction::cyclic("Z4", VariableSpace::range("O", 4)));
  const Matrix u = rep(1);
  EXPECT_EQ(u * u * u * u, Matrix::Identity(4, 4));
  EXPECT_NE(u * u, Matrix::Identity(4, 4));
}

TEST(Hilbert, IdentityMapsToIdentity) {
  auto g = GroupAction::cyclic("Z5", VariableSpace::range("O", 5));
  auto rep = regular(g);
  EXPECT_EQ(rep(g.identity_index()), Matrix::Identity(5, 5));
}

TEST(Hilbert, Z6HomomorphismAllPairs) {
  auto g = GroupAction::cyclic("Z6", VariableSpace::range("O", 6));
  auto rep = regular(g);
  for (std::size_t a = 0; a < 6; ++a) {
    for (std::size_t b = 0; b < 6; ++b) {
      const auto ab = *g.index_of(g.element(a) * g.element(b));
      EXPECT_LE((rep(a) * rep(b) - rep(ab)).norm(), tol::kExact);
    }
  }
}

TEST(Hilbert, CorruptedMatrixFailsUnitarity) {
  auto rep = regular(GroupAction::cyclic("Z3", VariableSpace::range("O", 3)));
  ASSERT_TRUE(verify_lemmas(rep, index_seed(3)).unitarity.passed);
  rep.matrices[1].matrix(0, 0) = 1.0;  // one entry flipped 0 -> 1
  const auto report = verify_lemmas(rep, index_seed(3));
  EXPECT_FALSE(report.unitarity.passed);
  EXPECT_GT(report.unitarity.defect, 0.5);
  EXPECT_FALSE(report.all_passed());
}

TEST(Hilbert, Z4IndexSeedGivesFourCoherentVectors) {
  auto rep = regular(GroupAction::cyclic("Z4", VariableSpace::range("O", 4)));
  const auto report = verify_lemmas(rep, index_seed(4));
  EXPECT_TRUE(report.injectivity.passed);
  EXPECT_EQ(report.distinct_coherent, 4u);
  auto fam = coherent_family(rep, index_seed(4));
  EXPECT_EQ(fam.members.size(), 4u);
  EXPECT_GT(fam.min_separation(), 1.0);
}

TEST(Hilbert, NonInjectiveSeedRejected) {
  auto rep = regular(GroupAction::cyclic("Z4", VariableSpace::range("O", 4)));
  Vector seed(4);
  seed << 1, 1, 2, 3;
  EXPECT_THROW(coherent_family(rep, seed), SeedError);
}

TEST(Hilbert, PhaseSeedHasEqualNorms) {
  auto g = GroupAction::cyclic("Z4", VariableSpace::range("O", 4));
  auto rep = regular(g);
  Vector seed(4);
  seed << 1.0, Complex(0, 1), -1.0, Complex(0, -1);
  auto fam = coherent_family(rep, seed);
  FunctionSpace l2(g.space(), invariant_measure(g));
  for (const auto& f : fam.members) EXPECT_NEAR(l2.norm(f), 2.0, tol::kExact);
  EXPECT_GT(fam.min_separation(), 1.0);
}

TEST(Hilbert, NonTransitiveRejected) {
  auto space = VariableSpace::range("O", 4);
  auto g = GroupAction::generate("G", space, {Permutation({1, 0, 2, 3})});
  EXPECT_THROW(regular(g), PostulateViolation);
}

TEST(Hilbert, NonFreeRejected) {
  auto s3 = GroupAction::symmetric("S3", VariableSpace::range("O", 3));
  EXPECT_THROW(regular(s3), PostulateViolation);
}

TEST(Hilbert, InnerProductUsesWeights) {
  auto space = VariableSpace::range("O", 2);
  InvariantMeasure mu{space, {2.0, 3.0}, 2};
  FunctionSpace l2(space, mu);
  Vector f(2);
  f << 1.0, Complex(0, 1);
  EXPECT_NEAR(l2.inner(f, f).real(), 5.0, tol::kExact);
  InvariantMeasure bad{space, {1.0, 0.0}, 2};
  EXPECT_THROW(FunctionSpace(space, bad), DomainError);
}

// Regular representations of several groups: every lemma holds and the
// coherent family has |G| members.
TEST(HilbertProperty, RegularRepresentationsSatisfyLemmas) {
  std::vector<GroupAction> groups;
  for (std::size_t n = 1; n <= 8; ++n) groups.push_back(GroupAction::cyclic("Z", VariableSpace::range("O", n)));
  groups.push_back(cayley(GroupAction::symmetric("S3", VariableSpace::range("O", 3)), "S3"));
  groups.push_back(cayley(GroupAction::symmetric("S4", VariableSpace::range("O", 4)), "S4"));
  auto d4 = GroupAction::generate("D4", VariableSpace::range("O", 4),
                                  {Permutation({1, 2, 3, 0}), Permutation({0, 3, 2, 1})});
  groups.push_back(cayley(d4, "D4"));
  for (const auto& g : groups) {
    ASSERT_TRUE(verify_group(g).valid);
    auto rep = regular(g);
    const auto report = verify_lemmas(rep, index_seed(g.order()));
    EXPECT_TRUE(report.all_passed()) << g.id();
    EXPECT_EQ(report.distinct_coherent, g.order());
    for (std::size_t i = 0; i < g.order(); ++i) {
      EXPECT_LE(unitarity_defect(rep(i)), tol::kExact);
    }
  }
}

}  // namespace
