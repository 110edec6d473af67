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

#include <random>

#include "oracles.hpp"
#include "qrecon/variables.hpp"

using namespace qrecon;

namespace {

VariableSpace four() { return VariableSpace::range("Omega_phi", 4); }

TheoreticalVariable theta() { return {"theta", four(), {"0", "1", "0", "1"}}; }
TheoreticalVariable eta() { return {"eta", four(), {"0", "0", "1", "1"}}; }

TEST(Variables, FunctionOfIdentity) {
  EXPECT_TRUE(is_function_of(theta(), identity_variable(four(), "phi")));
}

TEST(Variables, ParityIsNotAFunctionOfHalf) {
  EXPECT_FALSE(is_function_of(theta(), eta()));
  EXPECT_FALSE(is_function_of(eta(), theta()));
}

TEST(Variables, FunctionOfItself) { EXPECT_TRUE(is_function_of(theta(), theta())); }

TEST(Variables, DomainMismatchThrows) {
  TheoreticalVariable other("x", VariableSpace::range("other", 4), {"0", "1", "0", "1"});
  EXPECT_THROW(is_function_of(theta(), other), DomainError);
  EXPECT_THROW(is_bijective_correspondence(theta(), other), DomainError);
}

TEST(Variables, RelabelledParityIsBijective) {
  TheoreticalVariable flipped("not_theta", four(), {"1", "0", "1", "0"});
  EXPECT_TRUE(is_bijective_correspondence(theta(), flipped));
  EXPECT_FALSE(is_bijective_correspondence(theta(), eta()));
  EXPECT_TRUE(is_bijective_correspondence(eta(), eta()));
}

TEST(Variables, MaximalWithInaccessibleJoin) {
  TheoreticalVariable join("xi", four(), {"00", "10", "01", "11"}, /*accessible=*/false);
  VariableFamily fam(four(), {theta(), eta(), join});
  EXPECT_TRUE(is_maximal(theta(), fam));
  EXPECT_TRUE(is_maximal(eta(), fam));
}

TEST(Variables, NotMaximalBelowAccessiblePair) {
  TheoreticalVariable psi("psi", four(), {"00", "10", "01", "11"});
  VariableFamily fam(four(), {theta(), eta(), psi});
  EXPECT_FALSE(is_maximal(theta(), fam));
  EXPECT_TRUE(is_maximal(psi, fam));
  auto cover = maximal_cover(theta(), fam);
  ASSERT_TRUE(cover.has_value());
  EXPECT_EQ(cover->id(), "psi");
}

TEST(Variables, SingleMemberIsMaximal) {
  VariableFamily fam(four(), {theta()});
  EXPECT_TRUE(is_maximal(theta(), fam));
}

TEST(Variables, InaccessibleMaximalityThrows) {
  TheoreticalVariable hidden("h", four(), {"a", "b", "a", "b"}, false);
  VariableFamily fam(four(), {theta(), hidden});
  EXPECT_THROW(is_maximal(hidden, fam), AccessibilityError);
}

TEST(Variables, ConstructionRejectsWrongLength) {
  EXPECT_THROW(TheoreticalVariable("bad", four(), {"0", "1"}), DomainError);
}

TEST(Variables, ValueSetInFirstAppearanceOrder) {
  TheoreticalVariable v("v", four(), {"b", "a", "b", "c"});
  EXPECT_EQ(v.value_set(), (std::vector<std::string>{"b", "a", "c"}));
  EXPECT_EQ(v.cardinality(), 3u);
  EXPECT_EQ(v.preimages()[0], (std::vector<std::size_t>{0, 2}));
}

// Random families on at most six points: the order "is a function of" is
// reflexive, transitive and antisymmetric up to bijection, and agrees with
// the map-based oracle.
TEST(VariablesProperty, PartialOrderLaws) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng() % 6;
    auto space = VariableSpace::range("Omega", n);
    std::vector<TheoreticalVariable> vars;
    for (int k = 0; k < 6; ++k) {
      std::vector<std::string> vals(n);
      const unsigned labels = 1 + rng() % n;
      for (auto& x : vals) x = std::to_string(rng() % labels);
      vars.emplace_back("v" + std::to_string(k), space, vals);
    }
    for (const auto& a : vars) {
      EXPECT_TRUE(is_function_of(a, a));
      for (const auto& b : vars) {
        EXPECT_EQ(is_function_of(a, b), oracle::function_of(a.table(), b.table()));
        if (is_function_of(a, b) && is_function_of(b, a)) {
          EXPECT_TRUE(is_bijective_correspondence(a, b));
        }
        for (const auto& c : vars) {
          if (is_function_of(a, b) && is_function_of(b, c)) {
            EXPECT_TRUE(is_function_of(a, c));
          }
        }
      }
    }
  }
}

TEST(VariablesProperty, PostCompositionIsAFunction) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng() % 5;
    auto space = VariableSpace::range("Omega", n);
    std::vector<std::string> vals(n);
    for (auto& x : vals) x = std::to_string(rng() % n);
    TheoreticalVariable v("v", space, vals);
    std::map<std::string, std::string> g;
    for (const auto& label : v.value_set()) g[label] = std::to_string(rng() % 3);
    auto gv = post_compose(v, [&](const std::string& x) { return g.at(x); }, "gv");
    EXPECT_TRUE(is_function_of(gv, v));
  }
}

}  // namespace
