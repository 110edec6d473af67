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
 * The check registry: one verification per name in check_names(), each
 * reading what it needs from a loaded Scenario. run_checks executes the
 * scenario's list in order; an exception inside one check becomes an
 * "error" entry and never stops the batch.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qrecon/errors.hpp"
#include "qrecon/experiments.hpp"
#include "qrecon/groups.hpp"
#include "qrecon/hilbert.hpp"
#include "qrecon/operators.hpp"
#include "qrecon/probability.hpp"
#include "qrecon/random.hpp"
#include "qrecon/relatedness.hpp"
#include "qrecon/report.hpp"
#include "qrecon/scenario.hpp"
#include "qrecon/variables.hpp"

namespace qrecon {

struct RunOptions {
  /// Seed for randomized sweeps.
  std::uint64_t seed = 1;
  /// Restrict to these check names (scenario order is kept); empty = all.
  std::vector<std::string> only;
};

namespace checks {

/// Accumulates metrics, witnesses and problems for one check.
class Outcome {
 public:
  explicit Outcome(std::string name) { c_.check = std::move(name); }

  void metric(const std::string& key, double value) {
    if (std::isfinite(value)) c_.metrics[key] = value;
  }
  /// Keeps the larger of the stored and new value.
  void metric_max(const std::string& key, double value) {
    auto it = c_.metrics.find(key);
    if (it == c_.metrics.end() || value > it->second) metric(key, value);
  }
  void metric_min(const std::string& key, double value) {
    auto it = c_.metrics.find(key);
    if (it == c_.metrics.end() || value < it->second) metric(key, value);
  }
  void witness(std::string w) { c_.witnesses.push_back(std::move(w)); }
  void require(bool ok, const std::string& problem) {
    if (!ok) problems_.push_back(problem);
  }

  CheckOutcome finish(const std::string& summary) {
    c_.status = problems_.empty() ? CheckStatus::Pass : CheckStatus::Fail;
    if (problems_.empty()) {
      c_.message = summary;
    } else {
      for (std::size_t i = 0; i < problems_.size(); ++i) {
        c_.message += (i ? "; " : "") + problems_[i];
      }
    }
    return std::move(c_);
  }

 private:
  CheckOutcome c_;
  std::vector<std::string> problems_;
};

inline std::string num(double x) { return format_double(x); }

inline std::vector<TheoreticalVariable> accessible(const Scenario& s) {
  std::vector<TheoreticalVariable> out;
  for (const auto& d : s.variables) {
    if (d.variable.accessible()) out.push_back(d.variable);
  }
  return out;
}

inline std::vector<TheoreticalVariable> maximal_accessible(const Scenario& s) {
  const auto fam = s.family();
  std::vector<TheoreticalVariable> out;
  for (const auto& v : accessible(s)) {
    if (is_maximal(v, fam)) out.push_back(v);
  }
  return out;
}

inline const GroupAction& transformation_group(const Scenario& s) {
  const auto* m = s.transformation_group();
  if (!m) throw PreconditionError("scenario declares no transformation group on phi");
  return m->action;
}

/// Declared relations, else all pairs of maximal accessible variables with
/// equally many values.
inline std::vector<std::pair<TheoreticalVariable, TheoreticalVariable>> relation_pairs(
    const Scenario& s) {
  std::vector<std::pair<TheoreticalVariable, TheoreticalVariable>> out;
  if (!s.relations.empty()) {
    for (const auto& r : s.relations) out.emplace_back(*s.variable(r.theta), *s.variable(r.eta));
    return out;
  }
  const auto max = maximal_accessible(s);
  for (std::size_t a = 0; a < max.size(); ++a) {
    for (std::size_t b = a + 1; b < max.size(); ++b) {
      if (max[a].cardinality() == max[b].cardinality()) out.emplace_back(max[a], max[b]);
    }
  }
  return out;
}

inline std::string expected_status(const Scenario& s, const std::string& theta,
                                   const std::string& eta) {
  for (const auto& r : s.relations) {
    if (r.theta == theta && r.eta == eta) return r.expect;
  }
  return {};
}

/// Embedding for η that agrees with θ's on shared labels, so the two
/// operators carry the same numbers for the same values.
inline NumericEmbedding embedding_like(const Scenario& s, const TheoreticalVariable& eta,
                                       const TheoreticalVariable& theta) {
  for (const auto& e : s.embeddings) {
    if (e.variable() == eta.id()) return e;
  }
  const auto base = s.embedding(theta);
  std::map<std::string, double> values;
  for (const auto& label : eta.value_set()) {
    auto it = base.values().find(label);
    if (it == base.values().end()) return s.embedding(eta);
    values[label] = it->second;
  }
  return NumericEmbedding(eta.id(), std::move(values));
}

inline std::string pair_name(const TheoreticalVariable& a, const TheoreticalVariable& b) {
  return a.id() + "/" + b.id();
}

// ---------------------------------------------------------------------------
// Structural checks on variables and groups

inline CheckOutcome variables_from_phi(const Scenario& s, const RunOptions&) {
  Outcome o("variables-from-phi");
  const auto phi = identity_variable(s.phi, "phi");
  std::size_t acc = 0;
  for (const auto& d : s.variables) {
    const auto& v = d.variable;
    o.require(v.domain() == s.phi, "'" + v.id() + "' is not defined on " + s.phi.id());
    o.require(is_function_of(v, phi), "'" + v.id() + "' is not a function of phi");
    acc += v.accessible() ? 1 : 0;
    o.witness(v.id() + (v.accessible() ? " (accessible)" : " (inaccessible)") + " takes " +
              std::to_string(v.cardinality()) + " values");
  }
  o.require(acc > 0, "no accessible variable");
  o.require(s.transformation_group() != nullptr, "no group acts on " + s.phi.id());
  o.metric("phi_points", double(s.phi.size()));
  o.metric("variables", double(s.variables.size()));
  o.metric("accessible", double(acc));
  if (const auto* m = s.transformation_group()) {
    o.metric("transformation_order", double(m->action.order()));
    o.metric("transformation_orbits", double(orbits(m->action).size()));
  }
  return o.finish("every variable is a function on " + s.phi.id() + " acted on by a group");
}

inline CheckOutcome maximal_cover_check(const Scenario& s, const RunOptions&) {
  Outcome o("maximal-cover");
  const auto fam = s.family();
  const auto acc = accessible(s);
  if (acc.empty()) throw PreconditionError("no accessible variable");
  std::size_t maximal = 0;
  for (const auto& v : acc) {
    const bool is_max = is_maximal(v, fam);
    maximal += is_max ? 1 : 0;
    auto cover = maximal_cover(v, fam);
    o.require(cover.has_value(), "'" + v.id() + "' lies below no maximal accessible variable");
    if (cover) {
      o.witness(v.id() + (is_max ? " is maximal" : " <= " + cover->id()));
    }
  }
  o.metric("accessible", double(acc.size()));
  o.metric("maximal", double(maximal));
  return o.finish("every accessible variable has a maximal cover");
}

inline CheckOutcome regular_group(const Scenario& s, const RunOptions&) {
  Outcome o("regular-group");
  std::size_t on_variables = 0;
  for (const auto& g : s.groups) {
    const auto& a = g.action;
    const auto cells = orbits(a);
    o.metric(g.id + ".order", double(a.order()));
    o.metric(g.id + ".orbits", double(cells.size()));
    if (g.acts_on == "phi") {
      o.witness(g.id + " on phi: order " + std::to_string(a.order()) + ", " +
                std::to_string(cells.size()) + " orbit(s)");
      continue;
    }
    ++on_variables;
    const bool transitive = cells.size() == 1;
    const bool free = isotropy_trivial(a);
    o.require(transitive, "'" + g.id + "' is not transitive on Omega_" + g.acts_on);
    o.require(free, "'" + g.id + "' has a non-trivial isotropy group");
    if (transitive && free) {
      o.require(a.order() == a.space().size(),
                "'" + g.id + "' is regular but its order differs from the space size");
    }
    const auto mu = invariant_measure(a);
    o.require(mu.is_invariant_under(a), "counting measure not invariant under '" + g.id + "'");
    o.witness(g.id + " on Omega_" + g.acts_on + ": order " + std::to_string(a.order()) +
              (transitive ? ", transitive" : ", intransitive") + (free ? ", free" : ", not free"));
  }
  if (on_variables == 0) throw PreconditionError("no group acts on a variable's value set");
  return o.finish("every group on a variable is transitive and free");
}

inline CheckOutcome same_category(const Scenario& s, const RunOptions&) {
  Outcome o("same-category");
  const auto max = maximal_accessible(s);
  if (max.size() < 2) throw PreconditionError("fewer than two maximal accessible variables");
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < max.size(); ++a) {
    for (std::size_t b = a + 1; b < max.size(); ++b) {
      ++pairs;
      o.require(max[a].cardinality() == max[b].cardinality(),
                pair_name(max[a], max[b]) + " take " + std::to_string(max[a].cardinality()) +
                    " and " + std::to_string(max[b].cardinality()) + " values");
      const auto* ga = s.group_on(max[a].id());
      const auto* gb = s.group_on(max[b].id());
      if (ga && gb) {
        o.require(ga->action.order() == gb->action.order(),
                  "groups on " + pair_name(max[a], max[b]) + " have different orders");
      }
    }
  }
  o.metric("maximal", double(max.size()));
  o.metric("pairs", double(pairs));
  return o.finish("all maximal accessible variables share one category");
}

inline CheckOutcome relatedness(const Scenario& s, const RunOptions&) {
  Outcome o("relatedness");
  const auto& m = transformation_group(s);
  const auto pairs = relation_pairs(s);
  if (pairs.empty()) throw PreconditionError("no pair of variables to relate");
  std::size_t related = 0;
  for (const auto& [theta, eta] : pairs) {
    const auto r = find_relation(theta, eta, m);
    std::string w = pair_name(theta, eta) + ": " + to_string(r.status);
    if (r.witness) {
      const auto& k = m.element(*r.witness);
      w += " via " + k.cycles() + " (" + std::to_string(r.witness_count) + " witness" +
           (r.witness_count == 1 ? ")" : "es)");
      if (r.status == RelationStatus::Related) {
        ++related;
        o.require(check_relation(theta, eta, m, k), pair_name(theta, eta) + ": witness fails");
        o.require(check_relation(eta, theta, m, k.inverse()),
                  pair_name(theta, eta) + ": inverse witness fails");
      } else {
        const auto& xi = *r.surrogate;
        o.require(is_bijective_correspondence(xi, eta),
                  pair_name(theta, eta) + ": surrogate not bijective to " + eta.id());
        o.require(check_relation(theta, xi, m, k), pair_name(theta, eta) + ": surrogate witness fails");
      }
    }
    o.witness(w);
    const auto expect = expected_status(s, theta.id(), eta.id());
    if (!expect.empty()) {
      o.require(expect == to_string(r.status), pair_name(theta, eta) + ": expected " + expect +
                                                   ", found " + to_string(r.status));
    }
  }
  o.metric("pairs", double(pairs.size()));
  o.metric("related", double(related));
  return o.finish("relations found and verified pointwise");
}

// ---------------------------------------------------------------------------
// Regular representation

inline std::vector<const GroupDecl*> variable_groups(const Scenario& s) {
  std::vector<const GroupDecl*> out;
  for (const auto& g : s.groups) {
    if (g.acts_on != "phi") out.push_back(&g);
  }
  if (out.empty()) throw PreconditionError("no group acts on a variable's value set");
  return out;
}

inline CheckOutcome representation_check(const Scenario& s, const std::string& name) {
  Outcome o(name);
  for (const auto* g : variable_groups(s)) {
    const auto rep = build_representation(g->action, invariant_measure(g->action));
    std::optional<Vector> seed;
    if (!g->seed.empty()) {
      Vector v(static_cast<Eigen::Index>(g->seed.size()));
      for (std::size_t i = 0; i < g->seed.size(); ++i) v(Eigen::Index(i)) = g->seed[i];
      seed = v;
    }
    const auto lemmas = verify_lemmas(rep, seed);
    const std::string& id = g->id;
    if (name == "rep-norm") {
      o.metric(id + ".defect", lemmas.norm_preservation.defect);
      o.require(lemmas.norm_preservation.passed,
                id + ": norm changed by " + num(lemmas.norm_preservation.defect));
    } else if (name == "rep-homomorphism") {
      o.metric(id + ".defect", lemmas.homomorphism.defect);
      o.require(lemmas.homomorphism.passed,
                id + ": U(g1)U(g2) != U(g1 g2), defect " + num(lemmas.homomorphism.defect));
    } else if (name == "rep-unitary") {
      o.metric(id + ".defect", lemmas.unitarity.defect);
      o.require(lemmas.unitarity.passed, id + ": not unitary, defect " + num(lemmas.unitarity.defect));
    } else {
      o.metric(id + ".distinct", double(lemmas.distinct_coherent));
      o.metric(id + ".min_separation", lemmas.injectivity.defect);
      const bool bijective = !seed || is_injective(*seed);
      o.require(bijective, id + ": seed is not a bijective function");
      if (bijective) {
        o.require(lemmas.injectivity.passed,
                  id + ": only " + std::to_string(lemmas.distinct_coherent) + " of " +
                      std::to_string(rep.matrices.size()) + " coherent vectors are distinct");
      }
    }
    o.witness(id + ": " + std::to_string(rep.matrices.size()) + " matrices of size " +
              std::to_string(rep.dimension()));
  }
  return o.finish("holds for every group on a variable");
}

// ---------------------------------------------------------------------------
// Operators

struct Construction {
  TheoreticalVariable v;
  TheoreticalVariable cover;
  BuiltOperator built;
};

/// Each accessible variable's operator on L²(Ω_w), w its maximal cover.
/// When a group acts on Ω_w it must be regular.
inline std::vector<Construction> constructions(const Scenario& s) {
  const auto fam = s.family();
  std::vector<Construction> out;
  for (const auto& v : accessible(s)) {
    auto cover = maximal_cover(v, fam);
    if (!cover) throw PreconditionError("'" + v.id() + "' has no maximal cover");
    if (const auto* g = s.group_on(cover->id())) {
      (void)build_representation(g->action, invariant_measure(g->action));
    }
    const auto space = FunctionSpace::over_variable(*cover);
    out.push_back({v, *cover, build_operator(v, s.embedding(v), space)});
  }
  if (out.empty()) throw PreconditionError("no accessible variable");
  return out;
}

inline CheckOutcome operator_construction(const Scenario& s, const RunOptions&) {
  Outcome o("operator-construction");
  for (const auto& c : constructions(s)) {
    const auto& a = c.built.op;
    const auto n = static_cast<Eigen::Index>(a.dimension());
    const auto embed = s.embedding(c.v);
    // Expected multiset: embed(v(w)) for each value of the cover w.
    std::vector<double> expected;
    std::map<std::string, std::size_t> multiplicity;
    for (const auto& u : c.cover.value_set()) {
      for (std::size_t p = 0; p < c.cover.domain().size(); ++p) {
        if (c.cover.at(p) == u) {
          expected.push_back(embed(c.v.at(p)));
          ++multiplicity[c.v.at(p)];
          break;
        }
      }
    }
    std::sort(expected.begin(), expected.end());
    std::vector<double> got(a.eigenvalues().data(), a.eigenvalues().data() + n);
    o.require(got == expected, c.v.id() + ": spectrum differs from the embedded values");
    o.require(hermiticity_defect(a.matrix()) == 0.0, c.v.id() + ": operator is not Hermitian");
    Matrix sum = Matrix::Zero(n, n);
    for (const auto& t : c.built.terms) {
      sum += t.projector;
      o.require(t.support.size() == multiplicity[t.label],
                c.v.id() + ": value " + t.label + " has multiplicity " +
                    std::to_string(t.support.size()) + ", preimage size " +
                    std::to_string(multiplicity[t.label]));
      o.require((t.projector * t.projector - t.projector).norm() == 0.0,
                c.v.id() + ": projector for " + t.label + " is not idempotent");
    }
    o.require(sum == Matrix::Identity(n, n), c.v.id() + ": projectors do not resolve the identity");
    std::string spectrum;
    for (const auto& t : c.built.terms) {
      spectrum += (spectrum.empty() ? "" : ", ") + t.label + "->" + num(t.value) + " x" +
                  std::to_string(t.support.size());
    }
    o.witness(c.v.id() + " on Omega_" + c.cover.id() + ": {" + spectrum + "}");
    o.metric_max("max_dimension", double(n));
  }
  o.metric("variables", double(accessible(s).size()));
  return o.finish("spectra equal embedded values with preimage multiplicities");
}

inline CheckOutcome spectral_maximality(const Scenario& s, const RunOptions&) {
  Outcome o("spectral-maximality");
  const auto fam = s.family();
  std::size_t compared = 0;
  for (const auto& c : constructions(s)) {
    const bool spectral = maximality_spectral_check(c.built.op);
    const bool order = is_maximal(c.v, fam);
    ++compared;
    o.require(spectral == order, c.v.id() + ": spectrum says " +
                                     (spectral ? "maximal" : "not maximal") + ", order says " +
                                     (order ? "maximal" : "not maximal"));
    o.witness(c.v.id() + (spectral ? ": simple spectrum" : ": degenerate spectrum"));
  }
  for (const auto& d : s.operators) {
    if (d.represents.empty() || d.kind == OperatorDecl::Kind::Diagonal) continue;
    const auto* v = s.variable(d.represents);
    if (!v->accessible()) continue;
    const bool spectral = maximality_spectral_check(d.op);
    const bool order = is_maximal(*v, fam);
    ++compared;
    o.require(spectral == order, d.id + " (" + v->id() + "): spectrum and order disagree");
    o.witness(d.id + (spectral ? ": simple spectrum" : ": degenerate spectrum"));
  }
  o.metric("operators", double(compared));
  return o.finish("simple spectrum exactly for maximal variables");
}

inline CheckOutcome conjugation(const Scenario& s, const RunOptions&) {
  Outcome o("conjugation");
  const auto& m = transformation_group(s);
  const auto space = phi_function_space(s.phi);
  std::size_t checked = 0;
  for (const auto& [theta, eta] : relation_pairs(s)) {
    const auto r = find_relation(theta, eta, m);
    if (r.status != RelationStatus::Related) continue;
    ++checked;
    const auto& k = m.element(*r.witness);
    const auto a_theta = build_operator(theta, s.embedding(theta), space).op;
    const auto a_eta = build_operator(eta, embedding_like(s, eta, theta), space).op;
    const auto c = conjugate_by_relation(a_theta, theta, eta, m, k, space);
    o.metric_max("spectrum_defect", c.spectrum_defect);
    o.metric_max("partition_defect", c.partition_defect);
    o.metric_max("operator_defect", (c.op.matrix() - a_eta.matrix()).norm());
    o.require(c.spectrum_preserved, pair_name(theta, eta) + ": spectrum moved by " + num(c.spectrum_defect));
    o.require(c.partition_matches, pair_name(theta, eta) + ": eigenspaces miss " + eta.id() +
                                       "'s partition by " + num(c.partition_defect));
    o.witness(pair_name(theta, eta) + ": S(" + k.cycles() + ")^dag A S has " + eta.id() +
              "'s eigenspaces");
  }
  if (checked == 0) throw PreconditionError("no related pair of variables");
  o.metric("pairs", double(checked));
  return o.finish("conjugation carries each operator onto its related partner");
}

inline CheckOutcome noncommutation(const Scenario& s, const RunOptions&) {
  Outcome o("noncommutation");
  std::vector<const OperatorDecl*> ops;
  for (const auto& d : s.operators) {
    if (!d.represents.empty() && maximality_spectral_check(d.op)) ops.push_back(&d);
  }
  std::size_t noncommuting = 0;
  std::size_t commuting = 0;
  for (std::size_t a = 0; a < ops.size(); ++a) {
    for (std::size_t b = a + 1; b < ops.size(); ++b) {
      if (ops[a]->op.dimension() != ops[b]->op.dimension()) continue;
      const auto& va = *s.variable(ops[a]->represents);
      const auto& vb = *s.variable(ops[b]->represents);
      const bool bijective = is_bijective_correspondence(va, vb);
      const auto c = commutator_check(ops[a]->op, ops[b]->op);
      const std::string pair = ops[a]->id + " and " + ops[b]->id;
      if (bijective) {
        ++commuting;
        o.metric_max("max_commuting_norm", c.norm);
        o.require(c.norm <= tol::kSpectral, pair + " (bijectively related) do not commute: ||[A,B]|| = " + num(c.norm));
      } else {
        ++noncommuting;
        o.metric_min("min_noncommuting_norm", c.norm);
        o.require(c.norm > 1e-6, pair + " commute although " + va.id() + " and " + vb.id() +
                                     " are not in bijection: ||[A,B]|| = " + num(c.norm));
      }
      o.witness(pair + ": ||[A,B]|| = " + num(c.norm));
    }
  }
  if (noncommuting + commuting == 0) throw PreconditionError("no pair of maximal operators");
  o.metric("noncommuting_pairs", double(noncommuting));
  o.metric("commuting_pairs", double(commuting));
  return o.finish("complementary operators do not commute");
}

inline CheckOutcome conjugation_implies_relation(const Scenario& s, const RunOptions&) {
  Outcome o("conjugation-implies-relation");
  const auto& m = transformation_group(s);
  const auto space = phi_function_space(s.phi);
  const auto pairs = relation_pairs(s);
  if (pairs.empty()) throw PreconditionError("no pair of variables");
  std::size_t found = 0;
  for (const auto& [theta, eta] : pairs) {
    const auto a_theta = build_operator(theta, s.embedding(theta), space).op;
    const auto a_eta = build_operator(eta, embedding_like(s, eta, theta), space).op;
    const auto k = relation_from_conjugation(a_theta, a_eta, m, space);
    const auto r = find_relation(theta, eta, m);
    if (k) {
      ++found;
      o.require(check_relation(theta, eta, m, m.element(*k)),
                pair_name(theta, eta) + ": conjugating " + m.element(*k).cycles() + " is no relation");
      if (r.status == RelationStatus::Related) {
        o.require(*k == *r.witness, pair_name(theta, eta) + ": search and relation disagree on k");
      }
    } else {
      o.require(r.status != RelationStatus::Related,
                pair_name(theta, eta) + ": related but no conjugating element found");
    }
    o.witness(pair_name(theta, eta) + ": " +
              (k ? "conjugated by " + m.element(*k).cycles() : std::string("no conjugating element")) +
              ", relation " + to_string(r.status));
  }
  o.metric("pairs", double(pairs.size()));
  o.metric("conjugated", double(found));
  return o.finish("every conjugating element is a relation");
}

// ---------------------------------------------------------------------------
// Probability

inline CheckOutcome born_rule(const Scenario& s, const RunOptions&) {
  Outcome o("born-rule");
  if (s.born.empty()) throw PreconditionError("no born experiment");
  for (const auto& b : s.born) {
    const auto& ba = s.basis(b.a)->basis;
    const auto& bb = s.basis(b.b)->basis;
    const auto p = born_matrix(ba, bb);
    const double rows = (p.rowwise().sum().array() - 1.0).abs().maxCoeff();
    const double cols = (p.colwise().sum().array() - 1.0).abs().maxCoeff();
    o.metric(b.id + ".row_defect", rows);
    o.metric(b.id + ".column_defect", cols);
    o.require(rows <= tol::kProbability && cols <= tol::kProbability,
              b.id + ": conditional probabilities are not doubly stochastic");
    if (!b.expect.empty()) {
      double defect = 0.0;
      for (std::size_t k = 0; k < b.expect.size(); ++k) {
        for (std::size_t j = 0; j < b.expect[k].size(); ++j) {
          defect = std::max(defect, std::abs(p(Eigen::Index(k), Eigen::Index(j)) - b.expect[k][j]));
        }
      }
      o.metric(b.id + ".expect_defect", defect);
      o.require(defect <= tol::kExact, b.id + ": differs from expected probabilities by " + num(defect));
    }
    o.witness(b.id + ": P(" + b.b + "=0 | " + b.a + "=0) = " + num(p(0, 0)));
  }
  return o.finish("conditional probabilities are squared overlaps");
}

inline CheckOutcome trace_rule(const Scenario& s, const RunOptions&) {
  Outcome o("trace-rule");
  if (s.born.empty()) throw PreconditionError("no born experiment");
  for (const auto& b : s.born) {
    const auto& ba = s.basis(b.a)->basis;
    const auto& bb = s.basis(b.b)->basis;
    std::vector<double> values = b.values;
    if (values.empty()) {
      for (std::size_t j = 0; j < bb.size(); ++j) values.push_back(double(j));
    }
    const auto a = spectral_operator(basis_matrix(bb), values);
    const auto p = born_matrix(ba, bb);
    double defect = 0.0;
    bool bounded = true;
    for (std::size_t k = 0; k < ba.size(); ++k) {
      const double e = expectation(DensityOperator::pure(ba[k]), a);
      double born = 0.0;
      for (std::size_t j = 0; j < values.size(); ++j) born += values[j] * p(Eigen::Index(k), Eigen::Index(j));
      defect = std::max(defect, std::abs(e - born));
      bounded = bounded && e >= a.eigenvalues()(0) - tol::kProbability &&
                e <= a.eigenvalues()(a.eigenvalues().size() - 1) + tol::kProbability;
    }
    o.metric(b.id + ".defect", defect);
    o.require(defect <= tol::kProbability, b.id + ": trace rule differs from Born sum by " + num(defect));
    o.require(bounded, b.id + ": expectation outside the spectrum");
    o.witness(b.id + ": trace(rho A) matches the Born average for every " + b.a + " state");
  }
  return o.finish("expectations equal Born averages");
}

inline CheckOutcome likelihood_povm_check(const Scenario& s, const RunOptions&) {
  Outcome o("likelihood-povm");
  std::size_t checked = 0;
  for (const auto& d : s.models) {
    if (d.basis.empty()) continue;
    ++checked;
    const auto effects = likelihood_povm(d.model, s.basis(d.basis)->basis);
    const double defect = povm_completeness_defect(effects);
    o.metric(d.model.id + ".completeness_defect", defect);
    o.require(defect <= tol::kProbability, d.model.id + ": effects sum to I only within " + num(defect));
    o.witness(d.model.id + ": " + std::to_string(effects.size()) + " effects on " + d.basis);
  }
  if (checked == 0) throw PreconditionError("no likelihood model with a basis");
  return o.finish("likelihood effects form a POVM");
}

inline CheckOutcome evidence_equivalence(const Scenario& s, const RunOptions&) {
  Outcome o("evidence-equivalence");
  if (s.evidence.empty()) throw PreconditionError("no evidence experiment");
  for (const auto& e : s.evidence) {
    const auto& b = s.basis(e.basis)->basis;
    const auto f1 = likelihood_effect(s.model(e.first_model)->model, e.first_data, b);
    const auto f2 = likelihood_effect(s.model(e.second_model)->model, e.second_data, b);
    const bool eq = evidence_equivalent(f1, f2);
    o.require(eq == e.expect_equivalent, e.id + ": expected " +
                                             (e.expect_equivalent ? "equivalent" : "distinct") +
                                             " evidence");
    o.witness(e.id + ": " + (eq ? "same evidence class" : "different evidence"));
  }
  return o.finish("evidence classes as expected");
}

inline CheckOutcome coherence_fit_check(const Scenario& s, const RunOptions&) {
  Outcome o("coherence-fit");
  if (s.coherence.empty()) throw PreconditionError("no coherence experiment");
  for (const auto& c : s.coherence) {
    std::vector<std::pair<Effect, double>> assignments;
    std::optional<DensityOperator> rho0;
    if (!c.generate_from.empty()) rho0 = DensityOperator::pure(s.state(c.generate_from)->state);
    for (std::size_t i = 0; i < c.projectors.size(); ++i) {
      Effect f(outer(s.state(c.projectors[i])->state.amplitudes()));
      const double p = rho0 ? (rho0->matrix() * f.matrix()).trace().real() : c.probabilities[i];
      assignments.emplace_back(std::move(f), p);
    }
    const auto fit = coherence_fit(assignments);
    o.metric(c.id + ".residual", fit.residual);
    o.metric(c.id + ".min_eigenvalue", fit.min_eigenvalue);
    o.require(fit.coherent == c.expect_coherent,
              c.id + ": expected " + (c.expect_coherent ? "coherent" : "incoherent") +
                  " assignment (residual " + num(fit.residual) + ", min eigenvalue " +
                  num(fit.min_eigenvalue) + ")");
    if (rho0 && fit.coherent) {
      const double err = (fit.fitted - rho0->matrix()).norm();
      o.metric(c.id + ".recovery_error", err);
      o.require(err <= 1e-8, c.id + ": recovered state off by " + num(err));
    }
    o.witness(c.id + ": " + (fit.coherent ? "coherent" : "incoherent") + ", residual " + num(fit.residual));
  }
  return o.finish("coherence verdicts as expected");
}

inline CheckOutcome product_amplitude(const Scenario& s, const RunOptions& opt) {
  Outcome o("product-amplitude");
  std::vector<AmplitudeExperiment> runs = s.amplitudes;
  if (runs.empty()) runs.push_back({"default", 10000, {}});
  Rng rng(opt.seed);
  for (const auto& a : runs) {
    auto pairs = a.pairs;
    for (std::size_t i = 0; i < a.samples; ++i) pairs.emplace_back(rng.unit_disc(), rng.unit_disc());
    double defect = 0.0;
    for (const auto& [c1, c2] : pairs) {
      const auto r = compose_independent(c1, c2);
      defect = std::max(defect, std::abs(r.probability - std::norm(c1) * std::norm(c2)));
      o.require(r.amplitude == c1 * c2, a.id + ": amplitude is not c1 c2");
    }
    o.metric(a.id + ".pairs", double(pairs.size()));
    o.metric(a.id + ".max_defect", defect);
    o.require(defect <= 1e-14, a.id + ": |c1 c2|^2 differs from |c1|^2 |c2|^2 by " + num(defect));
  }
  return o.finish("product probabilities factorize");
}

// ---------------------------------------------------------------------------
// Experiments

inline CheckOutcome intersubjectivity(const Scenario& s, const RunOptions&) {
  Outcome o("intersubjectivity");
  if (s.ozawa.empty()) throw PreconditionError("no measurement experiment");
  for (const auto& x : s.ozawa) {
    std::vector<std::pair<std::string, StateVector>> inputs;
    for (const auto& id : x.inputs) inputs.emplace_back(id, s.state(id)->state);
    if (x.sweep) {
      const auto sweep = sweep_inputs(x.system_dim);
      for (std::size_t i = 0; i < sweep.size(); ++i) {
        inputs.emplace_back("sweep" + std::to_string(i), sweep[i]);
      }
    }
    std::size_t failed = 0;
    double max_defect = 0.0;
    double max_off = 0.0;
    double max_marginal = 0.0;
    for (const auto& [label, in] : inputs) {
      const auto rho = x.model.prepare(DensityOperator::pure(in));
      const auto rep = reproducibility(x.model, rho, x.times);
      max_defect = std::max(max_defect, rep.max_defect);
      if (!rep.reproducible) {
        ++failed;
        if (!x.expect_reproducible && x.meter_dims.size() == 2) {
          bool refused = false;
          try {
            (void)intersubjectivity_joint(x.model, rho, x.times);
          } catch (const PreconditionError&) {
            refused = true;
          }
          o.require(refused, x.id + "/" + label + ": joint distribution computed without reproducibility");
        }
        continue;
      }
      if (x.meter_dims.size() != 2) continue;
      const auto j = intersubjectivity_joint(x.model, rho, x.times);
      max_off = std::max(max_off, j.max_off_diagonal);
      for (Eigen::Index v = 0; v < j.p.rows(); ++v) {
        max_marginal = std::max(max_marginal, std::abs(j.p.row(v).sum() - rep.meters[0][std::size_t(v)]));
        max_marginal = std::max(max_marginal, std::abs(j.p.col(v).sum() - rep.meters[1][std::size_t(v)]));
      }
    }
    o.metric(x.id + ".inputs", double(inputs.size()));
    o.metric(x.id + ".irreproducible_inputs", double(failed));
    o.metric(x.id + ".max_reproducibility_defect", max_defect);
    if (x.expect_reproducible) {
      o.require(failed == 0, x.id + ": " + std::to_string(failed) + " input(s) break reproducibility");
      o.metric(x.id + ".max_off_diagonal", max_off);
      o.metric(x.id + ".max_joint_marginal_defect", max_marginal);
      o.require(max_off <= tol::kExact, x.id + ": meters disagree with probability " + num(max_off));
      o.require(max_marginal <= tol::kProbability, x.id + ": joint marginals off by " + num(max_marginal));
      o.witness(x.id + ": " + std::to_string(inputs.size()) + " input(s) reproducible, meters always agree");
    } else {
      o.require(failed > 0, x.id + ": expected a reproducibility failure, none found");
      o.witness(x.id + ": reproducibility fails for " + std::to_string(failed) + " of " +
                std::to_string(inputs.size()) + " input(s), joint refused");
    }
  }
  return o.finish("reproducible meters never disagree");
}

inline std::string triple(const ContextViolation& v) {
  return v.theta + " related to " + v.eta + " and " + v.lambda + ", which are unrelated";
}

inline CheckOutcome context_constraint(const Scenario& s, const RunOptions&) {
  Outcome o("context-constraint");
  if (s.contexts.empty()) throw PreconditionError("no context experiment");
  for (const auto& c : s.contexts) {
    const auto r = validate_context(c.graph);
    o.metric(c.id + ".violations", double(r.violations.size()));
    o.require(r.valid == c.expect_valid, c.id + ": context is " + (r.valid ? "valid" : "invalid") +
                                              ", expected " + (c.expect_valid ? "valid" : "invalid"));
    for (const auto& v : r.violations) o.witness(c.id + ": " + triple(v));
    if (r.valid) o.witness(c.id + ": valid, " + std::to_string(c.graph.edges().size()) + " relation(s)");
  }
  return o.finish("context verdicts as expected");
}

inline CheckOutcome decision_context_check(const Scenario& s, const RunOptions&) {
  Outcome o("decision-context");
  if (s.decisions.empty()) throw PreconditionError("no decision experiment");
  for (const auto& d : s.decisions) {
    const auto r = decision_context(d.decisions, d.related);
    o.metric(d.id + ".violations", double(r.violations.size()));
    o.require(r.valid == d.expect_valid, d.id + ": decisions are " + (r.valid ? "compatible" : "incompatible") +
                                              ", expected " + (d.expect_valid ? "compatible" : "incompatible"));
    for (const auto& m : r.messages) o.witness(d.id + ": " + m);
    if (r.valid) o.witness(d.id + ": decisions can be held together");
  }
  return o.finish("decision verdicts as expected");
}

inline CheckOutcome chsh_check(const Scenario& s, const RunOptions&) {
  Outcome o("chsh");
  if (s.chsh.empty()) throw PreconditionError("no chsh experiment");
  const double classical = classical_chsh_bound();
  o.metric("classical_bound", classical);
  o.require(classical == 2.0, "classical bound is " + num(classical));
  for (const auto& c : s.chsh) {
    const auto r = chsh_value(c.setup);
    o.metric(c.id + ".S", r.s);
    o.metric(c.id + ".E11", r.correlators[0][0]);
    o.metric(c.id + ".E12", r.correlators[0][1]);
    o.metric(c.id + ".E21", r.correlators[1][0]);
    o.metric(c.id + ".E22", r.correlators[1][1]);
    o.require(r.within_tsirelson, c.id + ": S = " + num(r.s) + " exceeds 2 sqrt 2");
    if (c.expect_s) {
      o.require(std::abs(r.s - *c.expect_s) <= tol::kSpectral,
                c.id + ": S = " + num(r.s) + ", expected " + num(*c.expect_s));
    }
    o.witness(c.id + ": S = " + num(r.s) + (std::abs(r.s) > 2.0 + tol::kSpectral ? " (beyond the classical bound)" : ""));
  }
  return o.finish("CHSH values within the quantum bound");
}

using CheckFn = std::function<CheckOutcome(const Scenario&, const RunOptions&)>;

inline const std::map<std::string, CheckFn>& registry() {
  auto rep = [](const char* name) {
    return [name](const Scenario& s, const RunOptions&) { return representation_check(s, name); };
  };
  static const std::map<std::string, CheckFn> table{
      {"variables-from-phi", variables_from_phi},
      {"maximal-cover", maximal_cover_check},
      {"regular-group", regular_group},
      {"same-category", same_category},
      {"relatedness", relatedness},
      {"rep-norm", rep("rep-norm")},
      {"rep-homomorphism", rep("rep-homomorphism")},
      {"rep-unitary", rep("rep-unitary")},
      {"rep-coherent", rep("rep-coherent")},
      {"operator-construction", operator_construction},
      {"spectral-maximality", spectral_maximality},
      {"conjugation", conjugation},
      {"noncommutation", noncommutation},
      {"conjugation-implies-relation", conjugation_implies_relation},
      {"born-rule", born_rule},
      {"trace-rule", trace_rule},
      {"context-constraint", context_constraint},
      {"decision-context", decision_context_check},
      {"likelihood-povm", likelihood_povm_check},
      {"evidence-equivalence", evidence_equivalence},
      {"coherence-fit", coherence_fit_check},
      {"product-amplitude", product_amplitude},
      {"intersubjectivity", intersubjectivity},
      {"chsh", chsh_check}};
  return table;
}

}  // namespace checks

/// Runs one named check, capturing any error in the outcome.
inline CheckOutcome run_check(const Scenario& s, const std::string& name,
                              const RunOptions& opt = {}) {
  const auto& reg = checks::registry();
  auto it = reg.find(name);
  if (it == reg.end()) {
    return {name, CheckStatus::Error, {}, {}, "unknown check '" + name + "'", "UnknownCheck"};
  }
  try {
    return it->second(s, opt);
  } catch (const Error& e) {
    return {name, CheckStatus::Error, {}, {}, e.what(), e.kind()};
  } catch (const std::exception& e) {
    return {name, CheckStatus::Error, {}, {}, e.what(), "InternalError"};
  }
}

/// Executes the scenario's checks in declaration order.
inline Report run_checks(const Scenario& s, const RunOptions& opt = {}) {
  Report r;
  r.scenario = s.name;
  for (const auto& name : s.checks) {
    if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), name) == opt.only.end()) {
      continue;
    }
    r.checks.push_back(run_check(s, name, opt));
  }
  return r;
}

}  // namespace qrecon
