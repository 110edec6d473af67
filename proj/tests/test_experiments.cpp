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
#include "qrecon/experiments.hpp"
#include "qrecon/random.hpp"

using namespace qrecon;

namespace {

const double kPi = std::acos(-1.0);

DensityOperator pure(const Vector& v) { return DensityOperator::pure(StateVector::normalized(v)); }

Vector ket(std::initializer_list<Complex> c) {
  Vector v(Eigen::Index(c.size()));
  Eigen::Index i = 0;
  for (auto x : c) v(i++) = x;
  return v;
}

std::size_t index_of_value(const std::vector<double>& values, double x) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::abs(values[i] - x) < 1e-12) return i;
  }
  return values.size();
}

// --- meter agreement ------------------------------------------------------

TEST(Ozawa, CopyScenarioReproducesSweep) {
  const auto s = copy_scenario();
  const auto inputs = sweep_inputs(2);
  EXPECT_EQ(inputs.size(), 4u);
  for (const auto& in : inputs) {
    const auto rho = s.prepare(DensityOperator::pure(in));
    const auto r = reproducibility(s, rho);
    EXPECT_TRUE(r.reproducible);
    EXPECT_LE(r.max_defect, tol::kProbability);
  }
}

TEST(Ozawa, PlusStateJointIsDiagonalHalf) {
  const auto s = copy_scenario();
  const auto rho = s.prepare(pure(ket({1.0, 1.0})));
  const auto j = intersubjectivity_joint(s, rho);
  ASSERT_EQ(j.p.rows(), 2);
  EXPECT_NEAR(j.p(0, 0), 0.5, tol::kProbability);
  EXPECT_NEAR(j.p(1, 1), 0.5, tol::kProbability);
  EXPECT_LE(j.max_off_diagonal, 1e-12);
  EXPECT_LE(j.commutator_norm, tol::kSpectral);
}

TEST(Ozawa, EigenstateIsDeterministic) {
  const auto s = copy_scenario();
  const auto rho = s.prepare(pure(ket({1.0, 0.0})));
  const auto r = reproducibility(s, rho);
  EXPECT_TRUE(r.reproducible);
  const auto plus = index_of_value(r.values, 1.0);
  ASSERT_LT(plus, r.values.size());
  EXPECT_NEAR(r.system[plus], 1.0, tol::kProbability);
  const auto j = intersubjectivity_joint(s, rho);
  EXPECT_NEAR(j.p(Eigen::Index(plus), Eigen::Index(plus)), 1.0, tol::kProbability);
  EXPECT_NEAR(j.p.sum(), 1.0, tol::kProbability);
}

TEST(Ozawa, UncoupledMetersFail) {
  auto s = copy_scenario();
  s.evolution = Matrix::Identity(8, 8);
  const auto rho = s.prepare(pure(ket({1.0, 1.0})));
  EXPECT_FALSE(check_reproducibility(s, rho));
  EXPECT_THROW(intersubjectivity_joint(s, rho), PreconditionError);
}

TEST(Ozawa, SingleCoupledMeterRefused) {
  const auto s = copy_scenario({0});
  const auto rho = s.prepare(pure(ket({1.0, 1.0})));
  const auto r = reproducibility(s, rho);
  EXPECT_FALSE(r.reproducible);
  EXPECT_GT(r.max_defect, 0.4);
  EXPECT_THROW(intersubjectivity_joint(s, rho), PreconditionError);
}

TEST(Ozawa, HamiltonianEvolution) {
  auto s = copy_scenario();
  s.hamiltonian = Matrix::Zero(8, 8);  // U(t) = I
  EXPECT_LE((s.unitary(0.7) - Matrix::Identity(8, 8)).norm(), tol::kExact);
  const auto rho = s.prepare(pure(ket({1.0, 1.0})));
  EXPECT_FALSE(check_reproducibility(s, rho, {0.3, 0.7}));
}

TEST(Ozawa, SpectralMismatchRejected) {
  auto s = copy_scenario();
  s.pointers[1] = HermitianOperator(2.0 * pauli::z());
  const auto rho = s.prepare(pure(ket({1.0, 0.0})));
  EXPECT_THROW(reproducibility(s, rho), SpectrumError);
}

TEST(Ozawa, InvalidScenarios) {
  auto s = copy_scenario();
  s.evolution(0, 0) = 2.0;
  EXPECT_THROW(s.validate(), ModelError);
  auto t = copy_scenario();
  t.meter_init = {0};
  EXPECT_THROW(t.validate(), ModelError);
}

// Random system states: the copy circuit always reproduces, joints are
// diagonal and marginals match the pointer distributions.
TEST(OzawaProperty, RandomInputs) {
  Rng rng(201);
  const auto s = copy_scenario();
  for (int t = 0; t < 200; ++t) {
    const auto sys = t % 2 ? rng.density(2) : DensityOperator::pure(rng.state(2));
    const auto rho = s.prepare(sys);
    const auto r = reproducibility(s, rho);
    ASSERT_TRUE(r.reproducible);
    const auto j = intersubjectivity_joint(s, rho);
    EXPECT_LE(j.max_off_diagonal, 1e-12);
    for (Eigen::Index x = 0; x < j.p.rows(); ++x) {
      EXPECT_NEAR(j.p.row(x).sum(), r.meters[0][std::size_t(x)], tol::kProbability);
      EXPECT_NEAR(j.p.col(x).sum(), r.meters[1][std::size_t(x)], tol::kProbability);
    }
  }
}

// --- contexts -------------------------------------------------------------

TEST(Context, PairIsValid) {
  ContextGraph g({"theta", "eta"});
  g.relate("theta", "eta");
  EXPECT_TRUE(validate_context(g).valid);
}

TEST(Context, OpenTriangleIsInvalid) {
  ContextGraph g({"theta", "eta", "lambda"});
  g.relate("theta", "eta");
  g.relate("theta", "lambda");
  const auto r = validate_context(g);
  EXPECT_FALSE(r.valid);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0], (ContextViolation{"theta", "eta", "lambda"}));
}

TEST(Context, CompleteGraphIsValid) {
  ContextGraph g({"a", "b", "c", "d"});
  for (const char* x : {"a", "b", "c", "d"}) {
    for (const char* y : {"a", "b", "c", "d"}) {
      if (std::string(x) < y) g.relate(x, y);
    }
  }
  EXPECT_TRUE(validate_context(g).valid);
}

TEST(Context, GraphErrors) {
  EXPECT_THROW(ContextGraph({"a", "a"}), ContextError);
  ContextGraph g({"a", "b"});
  EXPECT_THROW(g.relate("a", "z"), ContextError);
  EXPECT_THROW(g.relate("a", "a"), ContextError);
}

TEST(Context, FromVariables) {
  auto space = VariableSpace::range("O", 4);
  TheoreticalVariable theta("theta", space, {"0", "1", "0", "1"});
  TheoreticalVariable eta("eta", space, {"0", "0", "1", "1"});
  TheoreticalVariable four("four", space, {"a", "b", "c", "d"});
  const auto g = context_from_variables({theta, eta, four}, GroupAction::symmetric("M", space));
  EXPECT_TRUE(g.related("theta", "eta"));
  EXPECT_FALSE(g.related("theta", "four"));
  EXPECT_TRUE(validate_context(g).valid);
  const auto z4 = context_from_variables({theta, eta}, GroupAction::cyclic("Z4", space));
  EXPECT_FALSE(z4.related("theta", "eta"));
}

std::vector<std::string> names(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(std::string(1, char('a' + i)));
  return out;
}

// Every graph on at most five nodes: the violation list matches the triple
// oracle, and toggling one edge changes only triples that mention it.
TEST(ContextProperty, ExhaustiveSmallGraphs) {
  for (int n = 1; n <= 5; ++n) {
    const auto ids = names(n);
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
    }
    for (unsigned mask = 0; mask < (1U << pairs.size()); ++mask) {
      ContextGraph g(ids);
      std::vector<std::vector<bool>> adj(std::size_t(n), std::vector<bool>(std::size_t(n), false));
      for (std::size_t e = 0; e < pairs.size(); ++e) {
        if (mask >> e & 1U) {
          g.relate(ids[std::size_t(pairs[e].first)], ids[std::size_t(pairs[e].second)]);
          adj[std::size_t(pairs[e].first)][std::size_t(pairs[e].second)] = true;
          adj[std::size_t(pairs[e].second)][std::size_t(pairs[e].first)] = true;
        }
      }
      std::set<std::tuple<int, int, int>> got;
      for (const auto& v : validate_context(g).violations) {
        got.insert({v.theta[0] - 'a', v.eta[0] - 'a', v.lambda[0] - 'a'});
      }
      ASSERT_EQ(got, oracle::violations(adj)) << "n=" << n << " mask=" << mask;

      for (std::size_t e = 0; e < pairs.size(); ++e) {
        ContextGraph h = g;
        const auto& x = ids[std::size_t(pairs[e].first)];
        const auto& y = ids[std::size_t(pairs[e].second)];
        if (h.related(x, y)) h.unrelate(x, y); else h.relate(x, y);
        const auto before_list = validate_context(g).violations;
        std::set<ContextViolation> before(before_list.begin(), before_list.end());
        const auto after_list = validate_context(h).violations;
        std::set<ContextViolation> after(after_list.begin(), after_list.end());
        auto mentions = [&](const ContextViolation& v) {
          const std::set<std::string> t{v.theta, v.eta, v.lambda};
          return t.count(x) && t.count(y);
        };
        for (const auto& v : before) {
          if (!after.count(v)) {
            EXPECT_TRUE(mentions(v));
          }
        }
        for (const auto& v : after) {
          if (!before.count(v)) {
            EXPECT_TRUE(mentions(v));
          }
        }
      }
    }
  }
}

TEST(Decision, Examples) {
  EXPECT_TRUE(decision_context({{"d1", 2}, {"d2", 2}}, {{"d1", "d2"}}).valid);
  const auto bad = decision_context({{"d1", 2}, {"d2", 2}, {"d3", 3}}, {{"d1", "d2"}, {"d1", "d3"}});
  EXPECT_FALSE(bad.valid);
  ASSERT_EQ(bad.messages.size(), 1u);
  EXPECT_NE(bad.messages[0].find("'d2' and 'd3'"), std::string::npos);
  EXPECT_TRUE(decision_context({{"only", 3}}, {}).valid);
  EXPECT_THROW(decision_context({{"none", 0}}, {}), ContextError);
}

// --- CHSH -----------------------------------------------------------------

TEST(CHSH, SingletReachesTsirelson) {
  const auto r = chsh_value(spin_setup(singlet(), kPi / 2, 0.0, kPi / 4, 3 * kPi / 4, true));
  EXPECT_NEAR(r.s, 2.0 * std::sqrt(2.0), tol::kSpectral);
  EXPECT_TRUE(r.within_tsirelson);
}

TEST(CHSH, ClassicalBoundByEnumeration) {
  EXPECT_EQ(classical_chsh_bound(), 2.0);
  EXPECT_EQ(classical_chsh_range(), oracle::classical_range());
  EXPECT_EQ(classical_chsh_range().first, -2);
  EXPECT_EQ(chsh_strategy(1, 1, 1, 1), 2);
}

TEST(CHSH, EqualSettingsCollapse) {
  Rng rng(211);
  for (int t = 0; t < 50; ++t) {
    const double a = rng.uniform(0, 2 * kPi);
    const double b = rng.uniform(0, 2 * kPi);
    const auto r = chsh_value(spin_setup(rng.state(4), a, a, b, b));
    EXPECT_NEAR(r.s, 2.0 * r.correlators[0][0], 1e-12);
    EXPECT_LE(std::abs(r.s), 2.0 + tol::kSpectral);
  }
}

TEST(CHSH, SetupErrors) {
  auto s = spin_setup(singlet(), 0, 0, 0, 0);
  s.a[0] = 2.0 * pauli::z();
  EXPECT_THROW(chsh_value(s), SetupError);
  auto t = spin_setup(StateVector::basis(2, 0), 0, 0, 0, 0);
  EXPECT_THROW(chsh_value(t), SetupError);
}

// Singlet correlators against the closed form -cos(a - b).
TEST(CHSHProperty, SingletCorrelatorOracle) {
  Rng rng(223);
  for (int t = 0; t < 500; ++t) {
    double ang[4];
    for (double& x : ang) x = rng.uniform(-kPi, kPi);
    const auto r = chsh_value(spin_setup(singlet(), ang[0], ang[1], ang[2], ang[3]));
    double e[2][2];
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        e[i][j] = oracle::singlet_correlator(ang[i], ang[2 + j]);
        EXPECT_NEAR(r.correlators[std::size_t(i)][std::size_t(j)], e[i][j], 1e-12);
      }
    }
    EXPECT_NEAR(r.s, e[0][0] + e[0][1] + e[1][0] - e[1][1], 1e-12);
  }
}

Matrix random_sign_observable(Rng& rng, std::size_t d) {
  const Matrix u = rng.unitary(d);
  Vector signs(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < signs.size(); ++i) signs(i) = rng.uniform() < 0.5 ? -1.0 : 1.0;
  Matrix m = u * signs.asDiagonal() * u.adjoint();
  return 0.5 * (m + m.adjoint());
}

TEST(CHSHProperty, ProductStatesStayClassical) {
  Rng rng(227);
  for (int t = 0; t < 1000; ++t) {
    const auto a = rng.state(2), b = rng.state(2);
    CHSHSetup s{StateVector::normalized(kron(a.amplitudes(), b.amplitudes())),
                {random_sign_observable(rng, 2), random_sign_observable(rng, 2)},
                {random_sign_observable(rng, 2), random_sign_observable(rng, 2)}};
    EXPECT_LE(std::abs(chsh_value(s).s), 2.0 + tol::kSpectral);
  }
}

TEST(CHSHProperty, QuantumSetupsRespectTsirelson) {
  Rng rng(229);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t da = 2 + std::size_t(t) % 2, db = 2 + std::size_t(t / 2) % 2;
    CHSHSetup s{rng.state(da * db),
                {random_sign_observable(rng, da), random_sign_observable(rng, da)},
                {random_sign_observable(rng, db), random_sign_observable(rng, db)}};
    const auto r = chsh_value(s);
    EXPECT_LE(std::abs(r.s), tsirelson_bound() + tol::kSpectral);
    EXPECT_TRUE(r.within_tsirelson);
  }
}

}  // namespace
