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
 * Scenario documents: a versioned JSON bundle of Ω_φ, variables, groups,
 * operators, states and experiments, plus the names of the checks to run.
 *
 * Loading resolves every cross-reference and constructs the library
 * objects, so a loaded Scenario is known to satisfy all type invariants.
 * Failures raise ScenarioError with a JSON-pointer path. The schema is
 * documented in docs/scenario-format.md.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qrecon/errors.hpp"
#include "qrecon/experiments.hpp"
#include "qrecon/groups.hpp"
#include "qrecon/hilbert.hpp"
#include "qrecon/linalg.hpp"
#include "qrecon/operators.hpp"
#include "qrecon/probability.hpp"
#include "qrecon/variables.hpp"

namespace qrecon {

inline constexpr int kScenarioVersion = 1;

/// Published check registry, in canonical order.
inline const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names{
      "variables-from-phi", "maximal-cover",     "regular-group",
      "same-category",      "relatedness",       "rep-norm",
      "rep-homomorphism",   "rep-unitary",       "rep-coherent",
      "operator-construction", "spectral-maximality", "conjugation",
      "noncommutation",     "conjugation-implies-relation", "born-rule",
      "trace-rule",         "context-constraint", "decision-context",
      "likelihood-povm",    "evidence-equivalence", "coherence-fit",
      "product-amplitude",  "intersubjectivity", "chsh"};
  return names;
}

inline bool is_check_name(const std::string& name) {
  const auto& n = check_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

namespace detail {
inline bool same_matrix(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}
}  // namespace detail

struct VariableDecl {
  TheoreticalVariable variable;
  /// Group G acting on this variable's value set; may be empty.
  std::string group;
  friend bool operator==(const VariableDecl&, const VariableDecl&) = default;
};

struct GroupDecl {
  enum class Source { Elements, Generators, Named };
  std::string id;
  /// "phi" or a variable id.
  std::string acts_on;
  Source source = Source::Elements;
  /// "cyclic", "symmetric" or "trivial" when source is Named.
  std::string named;
  /// Element or generator image tables.
  std::vector<std::vector<std::size_t>> tables;
  /// Optional seed for the coherent family (real values).
  std::vector<double> seed;
  GroupAction action;
  friend bool operator==(const GroupDecl&, const GroupDecl&) = default;
};

struct StateDecl {
  std::string id;
  StateVector state;
  friend bool operator==(const StateDecl&, const StateDecl&) = default;
};

struct BasisDecl {
  enum class Kind { States, Fourier, Eigenbasis };
  std::string id;
  Kind kind = Kind::States;
  std::vector<std::string> states;
  std::size_t fourier = 0;
  std::string op;
  Basis basis;
  friend bool operator==(const BasisDecl&, const BasisDecl&) = default;
};

struct OperatorDecl {
  enum class Kind { Diagonal, Spectral, Explicit };
  std::string id;
  Kind kind = Kind::Explicit;
  /// Variable the operator stands for; may be empty.
  std::string represents;
  /// Diagonal: the variable, and "phi" or the variable whose value set is
  /// the basis.
  std::string variable;
  std::string space;
  /// Spectral.
  std::string basis;
  std::vector<double> values;
  std::vector<std::string> labels;
  /// Explicit.
  Matrix matrix;
  HermitianOperator op;

  friend bool operator==(const OperatorDecl& a, const OperatorDecl& b) {
    return a.id == b.id && a.kind == b.kind && a.represents == b.represents &&
           a.variable == b.variable && a.space == b.space && a.basis == b.basis && a.values == b.values &&
           a.labels == b.labels && detail::same_matrix(a.matrix, b.matrix) &&
           detail::same_matrix(a.op.matrix(), b.op.matrix());
  }
};

struct ModelDecl {
  LikelihoodModel model;
  std::string basis;
  friend bool operator==(const ModelDecl&, const ModelDecl&) = default;
};

struct RelationDecl {
  std::string theta;
  std::string eta;
  /// Expected RelationStatus name; empty means soundness only.
  std::string expect;
  friend bool operator==(const RelationDecl&, const RelationDecl&) = default;
};

struct BornExperiment {
  std::string id;
  std::string a;
  std::string b;
  /// Values v_j on the b basis for the trace rule; defaults to 0..n-1.
  std::vector<double> values;
  /// Expected conditional matrix (rows k, columns j); empty if unchecked.
  std::vector<std::vector<double>> expect;
  friend bool operator==(const BornExperiment&, const BornExperiment&) = default;
};

struct EvidenceExperiment {
  std::string id;
  std::string basis;
  std::string first_model;
  std::string first_data;
  std::string second_model;
  std::string second_data;
  bool expect_equivalent = true;
  friend bool operator==(const EvidenceExperiment&, const EvidenceExperiment&) = default;
};

struct CoherenceExperiment {
  std::string id;
  std::vector<std::string> projectors;
  std::vector<double> probabilities;
  std::string generate_from;
  bool expect_coherent = true;
  friend bool operator==(const CoherenceExperiment&, const CoherenceExperiment&) = default;
};

struct AmplitudeExperiment {
  std::string id;
  std::size_t samples = 0;
  std::vector<std::pair<Complex, Complex>> pairs;
  friend bool operator==(const AmplitudeExperiment&, const AmplitudeExperiment&) = default;
};

struct OzawaExperiment {
  enum class Evolution { Copy, Permutation, Explicit, Hamiltonian };
  std::string id;
  std::size_t system_dim = 0;
  std::vector<std::size_t> meter_dims;
  Evolution evolution = Evolution::Copy;
  std::vector<std::size_t> indices;
  Matrix matrix;
  std::pair<double, double> times{1.0, 1.0};
  std::vector<std::string> pointers;
  std::string system_observable;
  std::vector<std::size_t> meter_init;
  std::vector<std::string> inputs;
  bool sweep = false;
  bool expect_reproducible = true;
  MeasurementScenario model;

  friend bool operator==(const OzawaExperiment& a, const OzawaExperiment& b) {
    return a.id == b.id && a.system_dim == b.system_dim && a.meter_dims == b.meter_dims &&
           a.evolution == b.evolution && a.indices == b.indices &&
           detail::same_matrix(a.matrix, b.matrix) && a.times == b.times &&
           a.pointers == b.pointers && a.system_observable == b.system_observable &&
           a.meter_init == b.meter_init && a.inputs == b.inputs && a.sweep == b.sweep &&
           a.expect_reproducible == b.expect_reproducible;
  }
};

struct ChshExperiment {
  std::string id;
  std::string state;
  bool use_angles = true;
  std::array<double, 4> angles{};
  bool flip_b = false;
  std::array<std::string, 4> settings;
  std::optional<double> expect_s;
  CHSHSetup setup;

  friend bool operator==(const ChshExperiment& a, const ChshExperiment& b) {
    return a.id == b.id && a.state == b.state && a.use_angles == b.use_angles &&
           a.angles == b.angles && a.flip_b == b.flip_b && a.settings == b.settings &&
           a.expect_s == b.expect_s;
  }
};

struct ContextExperiment {
  std::string id;
  std::vector<std::string> variables;
  std::vector<std::pair<std::string, std::string>> related;
  bool from_relatedness = false;
  bool expect_valid = true;
  ContextGraph graph;
  friend bool operator==(const ContextExperiment&, const ContextExperiment&) = default;
};

struct DecisionExperiment {
  std::string id;
  std::vector<DecisionVariable> decisions;
  std::vector<std::pair<std::string, std::string>> related;
  bool expect_valid = true;

  friend bool operator==(const DecisionExperiment& a, const DecisionExperiment& b) {
    if (a.decisions.size() != b.decisions.size()) return false;
    for (std::size_t i = 0; i < a.decisions.size(); ++i) {
      if (a.decisions[i].id != b.decisions[i].id ||
          a.decisions[i].actions != b.decisions[i].actions) {
        return false;
      }
    }
    return a.id == b.id && a.related == b.related && a.expect_valid == b.expect_valid;
  }
};

struct Scenario {
  int version = kScenarioVersion;
  std::string name;
  std::string description;
  VariableSpace phi;
  std::vector<VariableDecl> variables;
  std::vector<GroupDecl> groups;
  /// Id of M, the group on Ω_φ used for relatedness.
  std::string transformations;
  std::vector<NumericEmbedding> embeddings;
  std::vector<StateDecl> states;
  std::vector<BasisDecl> bases;
  std::vector<OperatorDecl> operators;
  std::vector<ModelDecl> models;
  std::vector<RelationDecl> relations;
  std::vector<BornExperiment> born;
  std::vector<EvidenceExperiment> evidence;
  std::vector<CoherenceExperiment> coherence;
  std::vector<AmplitudeExperiment> amplitudes;
  std::vector<OzawaExperiment> ozawa;
  std::vector<ChshExperiment> chsh;
  std::vector<ContextExperiment> contexts;
  std::vector<DecisionExperiment> decisions;
  std::vector<std::string> checks;

  friend bool operator==(const Scenario&, const Scenario&) = default;

  VariableFamily family() const {
    std::vector<TheoreticalVariable> vs;
    for (const auto& v : variables) vs.push_back(v.variable);
    return VariableFamily(phi, std::move(vs));
  }

  const TheoreticalVariable* variable(const std::string& id) const {
    for (const auto& v : variables) {
      if (v.variable.id() == id) return &v.variable;
    }
    return nullptr;
  }

  const GroupDecl* group(const std::string& id) const {
    for (const auto& g : groups) {
      if (g.id == id) return &g;
    }
    return nullptr;
  }

  /// M, if the scenario has one.
  const GroupDecl* transformation_group() const {
    return transformations.empty() ? nullptr : group(transformations);
  }

  /// G acting on Ω_v for variable v, if any.
  const GroupDecl* group_on(const std::string& variable_id) const {
    for (const auto& v : variables) {
      if (v.variable.id() == variable_id && !v.group.empty()) return group(v.group);
    }
    for (const auto& g : groups) {
      if (g.acts_on == variable_id) return &g;
    }
    return nullptr;
  }

  NumericEmbedding embedding(const TheoreticalVariable& v) const {
    for (const auto& e : embeddings) {
      if (e.variable() == v.id()) return e;
    }
    return NumericEmbedding::natural(v);
  }

  const StateDecl* state(const std::string& id) const {
    for (const auto& s : states) {
      if (s.id == id) return &s;
    }
    return nullptr;
  }

  const BasisDecl* basis(const std::string& id) const {
    for (const auto& b : bases) {
      if (b.id == id) return &b;
    }
    return nullptr;
  }

  const OperatorDecl* op(const std::string& id) const {
    for (const auto& o : operators) {
      if (o.id == id) return &o;
    }
    return nullptr;
  }

  const ModelDecl* model(const std::string& id) const {
    for (const auto& m : models) {
      if (m.model.id == id) return &m;
    }
    return nullptr;
  }
};

/// L²(Ω_φ) with counting measure and φ itself as coordinate: the common
/// refinement basis on which every variable has a diagonal operator.
inline FunctionSpace phi_function_space(const VariableSpace& phi) {
  InvariantMeasure mu{phi, std::vector<double>(phi.size(), 1.0), 1};
  return FunctionSpace(phi, std::move(mu), identity_variable(phi, "phi"));
}

// ---------------------------------------------------------------------------
// Loading

namespace detail {

using json = nlohmann::json;

/// A JSON node together with its document path.
class Node {
 public:
  Node(const json& j, std::string path) : j_(&j), path_(std::move(path)) {}

  const json& raw() const { return *j_; }
  const std::string& path() const { return path_; }
  std::string where() const { return path_.empty() ? "/" : path_; }

  [[noreturn]] void fail(const std::string& kind, const std::string& what) const {
    throw ScenarioError(kind, where(), what);
  }

  bool has(const std::string& key) const { return j_->is_object() && j_->contains(key); }

  Node operator[](const std::string& key) const {
    require_object();
    if (!j_->contains(key)) fail("SchemaError", "missing required field '" + key + "'");
    return Node(j_->at(key), path_ + "/" + key);
  }

  Node operator[](std::size_t i) const { return Node(j_->at(i), path_ + "/" + std::to_string(i)); }

  std::optional<Node> find(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return (*this)[key];
  }

  void require_object() const {
    if (!j_->is_object()) fail("SchemaError", "expected an object");
  }

  /// Rejects fields outside `allowed`.
  void allow(std::initializer_list<const char*> allowed) const {
    require_object();
    for (const auto& [key, value] : j_->items()) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) Node(value, path_ + "/" + key).fail("SchemaError", "unknown field '" + key + "'");
    }
  }

  std::size_t size() const {
    if (!j_->is_array()) fail("SchemaError", "expected an array");
    return j_->size();
  }

  std::string str() const {
    if (!j_->is_string()) fail("SchemaError", "expected a string");
    return j_->get<std::string>();
  }

  double num() const {
    if (!j_->is_number()) fail("SchemaError", "expected a number");
    return j_->get<double>();
  }

  std::size_t index() const {
    if (!j_->is_number_integer() || j_->get<long long>() < 0) {
      fail("SchemaError", "expected a non-negative integer");
    }
    return j_->get<std::size_t>();
  }

  bool boolean() const {
    if (!j_->is_boolean()) fail("SchemaError", "expected true or false");
    return j_->get<bool>();
  }

  /// A real number, or [re, im].
  Complex complex() const {
    if (j_->is_number()) return {num(), 0.0};
    if (j_->is_array() && j_->size() == 2) return {(*this)[0].num(), (*this)[1].num()};
    fail("SchemaError", "expected a number or an [re, im] pair");
  }

  /// A number, or a string such as "pi", "-pi/2", "3*pi/4".
  double angle() const {
    if (j_->is_number()) return num();
    const std::string s = str();
    static const double pi = std::acos(-1.0);
    std::string t;
    for (char c : s) {
      if (c != ' ') t += c;
    }
    double sign = 1.0;
    if (!t.empty() && (t[0] == '-' || t[0] == '+')) {
      sign = t[0] == '-' ? -1.0 : 1.0;
      t.erase(0, 1);
    }
    const auto pos = t.find("pi");
    if (pos == std::string::npos) fail("SchemaError", "cannot read angle '" + s + "'");
    double num_part = 1.0;
    double den_part = 1.0;
    std::string head = t.substr(0, pos);
    std::string tail = t.substr(pos + 2);
    if (!head.empty() && head.back() == '*') head.pop_back();
    try {
      if (!head.empty()) num_part = std::stod(head);
      if (!tail.empty()) {
        if (tail[0] != '/') fail("SchemaError", "cannot read angle '" + s + "'");
        den_part = std::stod(tail.substr(1));
      }
    } catch (const std::logic_error&) {
      fail("SchemaError", "cannot read angle '" + s + "'");
    }
    return sign * num_part * pi / den_part;
  }

  std::vector<std::string> strings() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back((*this)[i].str());
    return out;
  }

  std::vector<double> numbers() const {
    std::vector<double> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back((*this)[i].num());
    return out;
  }

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back((*this)[i].index());
    return out;
  }

  Vector vector() const {
    Vector v(static_cast<Eigen::Index>(size()));
    for (std::size_t i = 0; i < size(); ++i) v(Eigen::Index(i)) = (*this)[i].complex();
    return v;
  }

  Matrix matrix() const {
    const std::size_t rows = size();
    if (rows == 0) fail("SchemaError", "empty matrix");
    const std::size_t cols = (*this)[0].size();
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
      Node row = (*this)[r];
      if (row.size() != cols) row.fail("SchemaError", "ragged matrix row");
      for (std::size_t c = 0; c < cols; ++c) m(Eigen::Index(r), Eigen::Index(c)) = row[c].complex();
    }
    return m;
  }

  /// Runs `f`, re-raising library errors with this node's path.
  template <class F>
  auto guard(F&& f) const -> decltype(f()) {
    try {
      return f();
    } catch (const ScenarioError&) {
      throw;
    } catch (const Error& e) {
      throw ScenarioError(e.kind(), where(), e.what());
    }
  }

 private:
  const json* j_;
  std::string path_;
};

template <class T, class Pred>
void require_unique(const std::vector<T>& items, Pred id_of, const Node& list,
                    const std::string& what) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (id_of(items[i]) == id_of(items[j])) {
        list[i].fail("SchemaError", "duplicate " + what + " id '" + id_of(items[i]) + "'");
      }
    }
  }
}

[[noreturn]] inline void unresolved(const Node& n, const std::string& what, const std::string& id) {
  n.fail("UnresolvedReference", "no " + what + " with id '" + id + "'");
}

inline std::vector<std::pair<std::string, std::string>> read_pairs(const Node& n) {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < n.size(); ++i) {
    Node p = n[i];
    if (p.size() != 2) p.fail("SchemaError", "expected a pair of ids");
    out.emplace_back(p[0].str(), p[1].str());
  }
  return out;
}

class Loader {
 public:
  explicit Loader(Scenario& s) : s_(s) {}

  void load(const Node& root) {
    root.require_object();
    root.allow({"version", "name", "description", "phi_space", "variables", "groups",
                "transformations", "embeddings", "states", "bases", "operators",
                "likelihood_models", "relations", "experiments", "checks"});
    Node version = root["version"];
    if (version.index() != std::size_t(kScenarioVersion)) {
      version.fail("SchemaError", "unsupported version " + std::to_string(version.index()));
    }
    s_.name = root["name"].str();
    if (s_.name.empty()) root["name"].fail("SchemaError", "name must not be empty");
    if (auto d = root.find("description")) s_.description = d->str();
    phi(root["phi_space"]);
    variables(root["variables"]);
    if (auto g = root.find("groups")) groups(*g);
    link_variable_groups(root["variables"]);
    if (auto t = root.find("transformations")) {
      s_.transformations = t->str();
      const auto* g = s_.group(s_.transformations);
      if (!g) unresolved(*t, "group", s_.transformations);
      if (g->acts_on != "phi") t->fail("SchemaError", "transformation group must act on phi");
    } else {
      for (const auto& g : s_.groups) {
        if (g.acts_on == "phi") {
          s_.transformations = g.id;
          break;
        }
      }
    }
    if (auto e = root.find("embeddings")) embeddings(*e);
    if (auto st = root.find("states")) states(*st);
    std::optional<Node> bases_node = root.find("bases");
    if (bases_node) bases(*bases_node, false);
    if (auto o = root.find("operators")) operators(*o);
    if (bases_node) bases(*bases_node, true);
    if (auto m = root.find("likelihood_models")) models(*m);
    if (auto r = root.find("relations")) relations(*r);
    if (auto x = root.find("experiments")) experiments(*x);
    checks(root["checks"]);
  }

 private:
  void phi(const Node& n) {
    n.allow({"id", "points"});
    s_.phi = n.guard([&] { return VariableSpace(n["id"].str(), n["points"].strings()); });
  }

  void variables(const Node& n) {
    for (std::size_t i = 0; i < n.size(); ++i) {
      Node v = n[i];
      v.allow({"id", "values", "accessible", "group"});
      const bool accessible = v.has("accessible") ? v["accessible"].boolean() : true;
      VariableDecl d{v.guard([&] {
                       return TheoreticalVariable(v["id"].str(), s_.phi, v["values"].strings(),
                                                  accessible);
                     }),
                     v.has("group") ? v["group"].str() : std::string()};
      s_.variables.push_back(std::move(d));
    }
    require_unique(s_.variables, [](const VariableDecl& d) { return d.variable.id(); }, n,
                   "variable");
  }

  void groups(const Node& n) {
    for (std::size_t i = 0; i < n.size(); ++i) {
      Node g = n[i];
      g.allow({"id", "acts_on", "elements", "generators", "named", "seed"});
      GroupDecl d;
      d.id = g["id"].str();
      d.acts_on = g["acts_on"].str();
      VariableSpace space;
      if (d.acts_on == "phi") {
        space = s_.phi;
      } else if (const auto* v = s_.variable(d.acts_on)) {
        space = VariableSpace("Omega_" + v->id(), v->value_set());
      } else {
        unresolved(g["acts_on"], "variable", d.acts_on);
      }
      const int sources = int(g.has("elements")) + int(g.has("generators")) + int(g.has("named"));
      if (sources != 1) g.fail("SchemaError", "give exactly one of elements, generators, named");
      auto tables = [&](const Node& list) {
        std::vector<Permutation> out;
        for (std::size_t k = 0; k < list.size(); ++k) {
          d.tables.push_back(list[k].indices());
          out.push_back(list[k].guard([&] { return Permutation(d.tables.back()); }));
        }
        return out;
      };
      if (auto e = g.find("elements")) {
        d.source = GroupDecl::Source::Elements;
        auto perms = tables(*e);
        d.action = e->guard([&] { return GroupAction(d.id, space, perms); });
      } else if (auto gen = g.find("generators")) {
        d.source = GroupDecl::Source::Generators;
        auto perms = tables(*gen);
        d.action = gen->guard([&] { return GroupAction::generate(d.id, space, perms); });
      } else {
        Node named = g["named"];
        d.source = GroupDecl::Source::Named;
        d.named = named.str();
        if (d.named == "cyclic") {
          d.action = GroupAction::cyclic(d.id, space);
        } else if (d.named == "symmetric") {
          d.action = named.guard([&] { return GroupAction::symmetric(d.id, space); });
        } else if (d.named == "trivial") {
          d.action = GroupAction::trivial(d.id, space);
        } else {
          named.fail("SchemaError", "unknown named group '" + d.named + "'");
        }
      }
      g.guard([&] { require_group(d.action); });
      if (auto seed = g.find("seed")) {
        d.seed = seed->numbers();
        if (d.seed.size() != space.size()) {
          seed->fail("SchemaError", "seed needs one value per point");
        }
      }
      s_.groups.push_back(std::move(d));
    }
    require_unique(s_.groups, [](const GroupDecl& d) { return d.id; }, n, "group");
  }

  void link_variable_groups(const Node& n) {
    for (std::size_t i = 0; i < s_.variables.size(); ++i) {
      const auto& d = s_.variables[i];
      if (d.group.empty()) continue;
      Node ref = n[i]["group"];
      const auto* g = s_.group(d.group);
      if (!g) unresolved(ref, "group", d.group);
      if (g->acts_on != d.variable.id()) {
        ref.fail("SchemaError", "group '" + d.group + "' does not act on '" + d.variable.id() + "'");
      }
    }
  }

  const TheoreticalVariable& variable_ref(const Node& n) {
    const std::string id = n.str();
    const auto* v = s_.variable(id);
    if (!v) unresolved(n, "variable", id);
    return *v;
  }

  void embeddings(const Node& n) {
    for (std::size_t i = 0; i < n.size(); ++i) {
      Node e = n[i];
      e.allow({"variable", "values"});
      const auto& v = variable_ref(e["variable"]);
      Node values = e["values"];
      values.require_object();
      std::map<std::string, double> map;
      for (const auto& [label, x] : values.raw().items()) {
        map[label] = Node(x, values.path() + "/" + label).num();
      }
      for (const auto& label : v.value_set()) {
        if (!map.count(label)) values.fail("EmbeddingError", "value '" + label + "' is not embedded");
      }
      for (const auto& [label, x] : map) {
        if (!v.value_index(label)) {
          values.fail("EmbeddingError", "'" + label + "' is not a value of '" + v.id() + "'");
        }
      }
      s_.embeddings.push_back(values.guard([&] { return NumericEmbedding(v.id(), map); }));
    }
    require_unique(s_.embeddings, [](const NumericEmbedding& e) { return e.variable(); }, n,
                   "embedding");
  }

  void states(const Node& n) {
    for (std::size_t i = 0; i < n.size(); ++i) {
      Node st = n[i];
      st.allow({"id", "amplitudes", "normalize"});
      const bool normalize = st.has("normalize") && st["normalize"].boolean();
      Vector v = st["amplitudes"].vector();
      StateDecl d{st["id"].str(), st.guard([&] {
                    return normalize ? StateVector::normalized(v) : StateVector(v);
                  })};
      s_.states.push_back(std::move(d));
    }
    require_unique(s_.states, [](const StateDecl& d) { return d.id; }, n, "state");
  }

  void bases(const Node& n, bool eigenbases) {
    for (std::size_t i = 0; i < n.size(); ++i) {
      Node b = n[i];
      b.allow({"id", "states", "fourier", "eigenbasis"});
      const bool is_eigen = b.has("eigenbasis");
      if (is_eigen != eigenbases) continue;
      BasisDecl d;
      d.id = b["id"].str();
      const int sources = int(b.has("states")) + int(b.has("fourier")) + int(is_eigen);
      if (sources != 1) b.fail("SchemaError", "give exactly one of states, fourier, eigenbasis");
      if (auto st = b.find("states")) {
        d.kind = BasisDecl::Kind::States;
        d.states = st->strings();
        for (std::size_t k = 0; k < d.states.size(); ++k) {
          const auto* sd = s_.state(d.states[k]);
          if (!sd) unresolved((*st)[k], "state", d.states[k]);
          d.basis.push_back(sd->state);
        }
      } else if (auto f = b.find("fourier")) {
        d.kind = BasisDecl::Kind::Fourier;
        d.fourier = f->index();
        if (d.fourier == 0) f->fail("SchemaError", "dimension must be positive");
        d.basis = basis_from_columns(fourier_basis(d.fourier));
      } else {
        Node ref = b["eigenbasis"];
        d.kind = BasisDecl::Kind::Eigenbasis;
        d.op = ref.str();
        const auto* o = s_.op(d.op);
        if (!o) unresolved(ref, "operator", d.op);
        d.basis = basis_from_columns(o->op.eigenvectors());
      }
      b.guard([&] { require_orthonormal(d.basis); });
      s_.bases.push_back(std::move(d));
    }
    if (eigenbases) require_unique(s_.bases, [](const BasisDecl& d) { return d.id; }, n, "basis");
  }

  void operators(const Node& n) {
    for (std::size_t i = 0; i < n.size(); ++i) {
      Node o = n[i];
      o.allow({"id", "represents", "diagonal", "spectral", "matrix"});
      OperatorDecl d;
      d.id = o["id"].str();
      const int sources = int(o.has("diagonal")) + int(o.has("spectral")) + int(o.has("matrix"));
      if (sources != 1) o.fail("SchemaError", "give exactly one of diagonal, spectral, matrix");
      if (auto r = o.find("represents")) {
        d.represents = r->str();
        variable_ref(*r);
      }
      if (auto diag = o.find("diagonal")) {
        diag->allow({"variable", "space"});
        d.kind = OperatorDecl::Kind::Diagonal;
        const auto& v = variable_ref((*diag)["variable"]);
        d.variable = v.id();
        if (d.represents.empty()) d.represents = v.id();
        d.space = diag->has("space") ? (*diag)["space"].str() : std::string("phi");
        FunctionSpace space;
        if (d.space == "phi") {
          space = phi_function_space(s_.phi);
        } else {
          space = FunctionSpace::over_variable(variable_ref((*diag)["space"]));
        }
        d.op = diag->guard([&] { return build_operator(v, s_.embedding(v), space).op; });
      } else if (auto sp = o.find("spectral")) {
        sp->allow({"basis", "values", "labels"});
        d.kind = OperatorDecl::Kind::Spectral;
        d.basis = (*sp)["basis"].str();
        const auto* b = s_.basis(d.basis);
        if (!b) unresolved((*sp)["basis"], "basis", d.basis);
        d.values = (*sp)["values"].numbers();
        if (auto l = sp->find("labels")) d.labels = l->strings();
        d.op = sp->guard([&] { return spectral_operator(basis_matrix(b->basis), d.values, d.labels); });
      } else {
        Node m = o["matrix"];
        d.kind = OperatorDecl::Kind::Explicit;
        d.matrix = m.matrix();
        d.op = m.guard([&] { return HermitianOperator(d.matrix); });
      }
      s_.operators.push_back(std::move(d));
    }
    require_unique(s_.operators, [](const OperatorDecl& d) { return d.id; }, n, "operator");
  }

  void models(const Node& n) {
    for (std::size_t i = 0; i < n.size(); ++i) {
      Node m = n[i];
      m.allow({"id", "values", "data", "probabilities", "context", "basis"});
      ModelDecl d;
      d.model.id = m["id"].str();
      d.model.values = m["values"].strings();
      d.model.data = m["data"].strings();
      Node p = m["probabilities"];
      if (p.size() != d.model.data.size()) p.fail("ModelError", "one row per data point is required");
      d.model.probabilities.resize(Eigen::Index(d.model.data.size()), Eigen::Index(d.model.values.size()));
      for (std::size_t z = 0; z < d.model.data.size(); ++z) {
        auto row = p[z].numbers();
        if (row.size() != d.model.values.size()) p[z].fail("ModelError", "one entry per value is required");
        for (std::size_t j = 0; j < row.size(); ++j) d.model.probabilities(Eigen::Index(z), Eigen::Index(j)) = row[j];
      }
      if (auto c = m.find("context")) d.model.context = c->str();
      m.guard([&] { d.model.validate(); });
      if (auto b = m.find("basis")) {
        d.basis = b->str();
        const auto* bd = s_.basis(d.basis);
        if (!bd) unresolved(*b, "basis", d.basis);
        if (bd->basis.size() != d.model.values.size()) {
          b->fail("ModelError", "basis size does not match the number of values");
        }
      }
      s_.models.push_back(std::move(d));
    }
    require_unique(s_.models, [](const ModelDecl& d) { return d.model.id; }, n, "likelihood model");
  }

  void relations(const Node& n) {
    for (std::size_t i = 0; i < n.size(); ++i) {
      Node r = n[i];
      r.allow({"theta", "eta", "expect"});
      RelationDecl d{variable_ref(r["theta"]).id(), variable_ref(r["eta"]).id(), {}};
      if (auto e = r.find("expect")) {
        d.expect = e->str();
        static const std::vector<std::string> ok{"OneToOne", "Related", "RelatedViaSurrogate",
                                                 "Unrelated"};
        if (std::find(ok.begin(), ok.end(), d.expect) == ok.end()) {
          e->fail("SchemaError", "unknown relation status '" + d.expect + "'");
        }
      }
      s_.relations.push_back(std::move(d));
    }
  }

  const Basis& basis_ref(const Node& n) {
    const std::string id = n.str();
    const auto* b = s_.basis(id);
    if (!b) unresolved(n, "basis", id);
    return b->basis;
  }

  const OperatorDecl& op_ref(const Node& n) {
    const std::string id = n.str();
    const auto* o = s_.op(id);
    if (!o) unresolved(n, "operator", id);
    return *o;
  }

  const StateDecl& state_ref(const Node& n) {
    const std::string id = n.str();
    const auto* st = s_.state(id);
    if (!st) unresolved(n, "state", id);
    return *st;
  }

  const ModelDecl& model_ref(const Node& n) {
    const std::string id = n.str();
    const auto* m = s_.model(id);
    if (!m) unresolved(n, "likelihood model", id);
    return *m;
  }

  void experiments(const Node& n) {
    n.allow({"born", "evidence", "coherence", "amplitudes", "ozawa", "chsh", "context", "decision"});
    if (auto b = n.find("born")) born(*b);
    if (auto e = n.find("evidence")) evidence(*e);
    if (auto c = n.find("coherence")) coherence(*c);
    if (auto a = n.find("amplitudes")) amplitudes(*a);
    if (auto o = n.find("ozawa")) ozawa(*o);
    if (auto c = n.find("chsh")) chsh(*c);
    if (auto c = n.find("context")) context(*c);
    if (auto d = n.find("decision")) decision(*d);
  }

  void born(const Node& n) {
    for (std::size_t i = 0; i < n.size(); ++i) {
      Node b = n[i];
      b.allow({"id", "a", "b", "values", "expect"});
      BornExperiment d{b["id"].str(), b["a"].str(), b["b"].str(), {}, {}};
      const auto& ba = basis_ref(b["a"]);
      const auto& bb = basis_ref(b["b"]);
      if (ba.front().dimension() != bb.front().dimension()) {
        b.fail("BasisError", "bases live in different dimensions");
      }
      if (auto v = b.find("values")) {
        d.values = v->numbers();
        if (d.values.size() != bb.size()) v->fail("SchemaError", "one value per b-basis vector");
      }
      if (auto e = b.find("expect")) {
        for (std::size_t k = 0; k < e->size(); ++k) d.expect.push_back((*e)[k].numbers());
        if (d.expect.size() != ba.size()) e->fail("SchemaError", "one row per a-basis vector");
        for (std::size_t k = 0; k < d.expect.size(); ++k) {
          if (d.expect[k].size() != bb.size()) (*e)[k].fail("SchemaError", "one entry per b-basis vector");
        }
      }
      s_.born.push_back(std::move(d));
    }
  }

  void evidence(const Node& n) {
    for (std::size_t i = 0; i < n.size(); ++i) {
      Node e = n[i];
      e.allow({"id", "basis", "first", "second", "expect_equivalent"});
      EvidenceExperiment d;
      d.id = e["id"].str();
      d.basis = e["basis"].str();
      const auto& b = basis_ref(e["basis"]);
      auto side = [&](const Node& s, std::string& model, std::string& data) {
        s.allow({"model", "data"});
        const auto& m = model_ref(s["model"]);
        model = m.model.id;
        data = s["data"].str();
        s["data"].guard([&] { (void)m.model.data_index(data); });
        if (m.model.values.size() != b.size()) s.fail("ModelError", "basis size does not match the model");
      };
      side(e["first"], d.first_model, d.first_data);
      side(e["second"], d.second_model, d.second_data);
      if (auto x = e.find("expect_equivalent")) d.expect_equivalent = x->boolean();
      s_.evidence.push_back(std::move(d));
    }
  }

  void coherence(const Node& n) {
    for (std::size_t i = 0; i < n.size(); ++i) {
      Node c = n[i];
      c.allow({"id", "projectors", "probabilities", "generate_from", "expect_coherent"});
      CoherenceExperiment d;
      d.id = c["id"].str();
      d.projectors = c["projectors"].strings();
      std::size_t dim = 0;
      for (std::size_t k = 0; k < d.projectors.size(); ++k) {
        const auto& st = state_ref(c["projectors"][k]);
        if (dim == 0) dim = st.state.dimension();
        if (st.state.dimension() != dim) c["projectors"][k].fail("DimensionError", "projector dimension differs");
      }
      const bool has_p = c.has("probabilities");
      const bool has_g = c.has("generate_from");
      if (has_p == has_g) c.fail("SchemaError", "give exactly one of probabilities, generate_from");
      if (has_p) {
        d.probabilities = c["probabilities"].numbers();
        if (d.probabilities.size() != d.projectors.size()) {
          c["probabilities"].fail("SchemaError", "one probability per projector");
        }
      } else {
        d.generate_from = state_ref(c["generate_from"]).id;
      }
      if (auto x = c.find("expect_coherent")) d.expect_coherent = x->boolean();
      s_.coherence.push_back(std::move(d));
    }
  }

  void amplitudes(const Node& n) {
    for (std::size_t i = 0; i < n.size(); ++i) {
      Node a = n[i];
      a.allow({"id", "samples", "pairs"});
      AmplitudeExperiment d;
      d.id = a["id"].str();
      if (auto s = a.find("samples")) d.samples = s->index();
      if (auto p = a.find("pairs")) {
        for (std::size_t k = 0; k < p->size(); ++k) {
          Node pair = (*p)[k];
          if (pair.size() != 2) pair.fail("SchemaError", "expected two amplitudes");
          d.pairs.emplace_back(pair[0].complex(), pair[1].complex());
          if (std::abs(d.pairs.back().first) > 1.0 + tol::kExact ||
              std::abs(d.pairs.back().second) > 1.0 + tol::kExact) {
            pair.fail("SchemaError", "amplitudes must lie in the unit disc");
          }
        }
      }
      s_.amplitudes.push_back(std::move(d));
    }
  }

  void ozawa(const Node& n) {
    for (std::size_t i = 0; i < n.size(); ++i) {
      Node o = n[i];
      o.allow({"id", "system_dim", "meter_dims", "evolution", "pointers", "system_observable",
               "meter_init", "inputs", "sweep", "expect_reproducible"});
      OzawaExperiment d;
      d.id = o["id"].str();
      d.system_dim = o["system_dim"].index();
      d.meter_dims = o["meter_dims"].indices();
      Node ev = o["evolution"];
      ev.allow({"copy", "permutation", "matrix", "hamiltonian", "times"});
      const int sources = int(ev.has("copy")) + int(ev.has("permutation")) + int(ev.has("matrix")) +
                          int(ev.has("hamiltonian"));
      if (sources != 1) ev.fail("SchemaError", "give exactly one of copy, permutation, matrix, hamiltonian");
      if (ev.has("times") && !ev.has("hamiltonian")) {
        ev["times"].fail("SchemaError", "times apply to a hamiltonian only");
      }
      auto& m = d.model;
      m.system_dim = d.system_dim;
      m.meter_dims = d.meter_dims;
      if (auto c = ev.find("copy")) {
        d.evolution = OzawaExperiment::Evolution::Copy;
        d.indices = c->indices();
        if (d.system_dim != 2 || std::any_of(d.meter_dims.begin(), d.meter_dims.end(),
                                             [](std::size_t x) { return x != 2; })) {
          c->fail("SchemaError", "copy circuits need qubit factors");
        }
        for (auto t : d.indices) {
          if (t >= d.meter_dims.size()) c->fail("SchemaError", "copy target out of range");
        }
        m.evolution = copy_circuit(d.meter_dims.size(), d.indices);
      } else if (auto p = ev.find("permutation")) {
        d.evolution = OzawaExperiment::Evolution::Permutation;
        d.indices = p->indices();
        p->guard([&] { Permutation check(d.indices); });
        m.evolution = permutation_matrix(d.indices);
      } else if (auto mx = ev.find("matrix")) {
        d.evolution = OzawaExperiment::Evolution::Explicit;
        d.matrix = mx->matrix();
        m.evolution = d.matrix;
      } else {
        d.evolution = OzawaExperiment::Evolution::Hamiltonian;
        d.matrix = ev["hamiltonian"].matrix();
        m.hamiltonian = d.matrix;
        if (auto t = ev.find("times")) {
          auto ts = t->numbers();
          if (ts.size() != 2) t->fail("SchemaError", "expected two times");
          d.times = {ts[0], ts[1]};
        }
      }
      Node ptrs = o["pointers"];
      for (std::size_t k = 0; k < ptrs.size(); ++k) {
        d.pointers.push_back(op_ref(ptrs[k]).id);
        m.pointers.push_back(op_ref(ptrs[k]).op);
      }
      d.system_observable = op_ref(o["system_observable"]).id;
      m.system_observable = op_ref(o["system_observable"]).op;
      d.meter_init = o["meter_init"].indices();
      m.meter_init = d.meter_init;
      o.guard([&] { m.validate(); });
      if (auto in = o.find("inputs")) {
        for (std::size_t k = 0; k < in->size(); ++k) {
          const auto& st = state_ref((*in)[k]);
          if (st.state.dimension() != d.system_dim) (*in)[k].fail("DimensionError", "input is not a system state");
          d.inputs.push_back(st.id);
        }
      }
      if (auto sw = o.find("sweep")) d.sweep = sw->boolean();
      if (d.inputs.empty() && !d.sweep) o.fail("SchemaError", "give inputs or set sweep");
      if (auto x = o.find("expect_reproducible")) d.expect_reproducible = x->boolean();
      s_.ozawa.push_back(std::move(d));
    }
  }

  void chsh(const Node& n) {
    for (std::size_t i = 0; i < n.size(); ++i) {
      Node c = n[i];
      c.allow({"id", "state", "angles", "settings", "expect_s"});
      ChshExperiment d;
      d.id = c["id"].str();
      const auto& st = state_ref(c["state"]);
      d.state = st.id;
      if (c.has("angles") == c.has("settings")) c.fail("SchemaError", "give exactly one of angles, settings");
      if (auto a = c.find("angles")) {
        a->allow({"a", "b", "flip_b"});
        Node aa = (*a)["a"];
        Node bb = (*a)["b"];
        if (aa.size() != 2 || bb.size() != 2) a->fail("SchemaError", "two angles per side");
        d.angles = {aa[0].angle(), aa[1].angle(), bb[0].angle(), bb[1].angle()};
        if (auto f = a->find("flip_b")) d.flip_b = f->boolean();
        d.setup = spin_setup(st.state, d.angles[0], d.angles[1], d.angles[2], d.angles[3], d.flip_b);
      } else {
        Node s = c["settings"];
        s.allow({"a", "b"});
        Node aa = s["a"];
        Node bb = s["b"];
        if (aa.size() != 2 || bb.size() != 2) s.fail("SchemaError", "two settings per side");
        d.use_angles = false;
        d.settings = {op_ref(aa[0]).id, op_ref(aa[1]).id, op_ref(bb[0]).id, op_ref(bb[1]).id};
        d.setup = CHSHSetup{st.state,
                            {op_ref(aa[0]).op.matrix(), op_ref(aa[1]).op.matrix()},
                            {op_ref(bb[0]).op.matrix(), op_ref(bb[1]).op.matrix()}};
      }
      c.guard([&] { d.setup.validate(); });
      if (auto e = c.find("expect_s")) d.expect_s = e->num();
      s_.chsh.push_back(std::move(d));
    }
  }

  void context(const Node& n) {
    for (std::size_t i = 0; i < n.size(); ++i) {
      Node c = n[i];
      c.allow({"id", "variables", "related", "from_relatedness", "expect_valid"});
      ContextExperiment d;
      d.id = c["id"].str();
      d.variables = c["variables"].strings();
      if (auto f = c.find("from_relatedness")) d.from_relatedness = f->boolean();
      if (d.from_relatedness == c.has("related")) {
        c.fail("SchemaError", "give related pairs or set from_relatedness, not both");
      }
      if (auto x = c.find("expect_valid")) d.expect_valid = x->boolean();
      if (d.from_relatedness) {
        const auto* m = s_.transformation_group();
        if (!m) c.fail("UnresolvedReference", "from_relatedness needs a transformation group");
        std::vector<TheoreticalVariable> vars;
        for (std::size_t k = 0; k < d.variables.size(); ++k) {
          vars.push_back(variable_ref(c["variables"][k]));
        }
        d.graph = c.guard([&] { return context_from_variables(vars, m->action); });
      } else {
        d.related = read_pairs(c["related"]);
        d.graph = c.guard([&] {
          ContextGraph g(d.variables);
          for (const auto& [a, b] : d.related) g.relate(a, b);
          return g;
        });
      }
      s_.contexts.push_back(std::move(d));
    }
  }

  void decision(const Node& n) {
    for (std::size_t i = 0; i < n.size(); ++i) {
      Node c = n[i];
      c.allow({"id", "decisions", "related", "expect_valid"});
      DecisionExperiment d;
      d.id = c["id"].str();
      Node ds = c["decisions"];
      for (std::size_t k = 0; k < ds.size(); ++k) {
        ds[k].allow({"id", "actions"});
        d.decisions.push_back({ds[k]["id"].str(), ds[k]["actions"].index()});
      }
      d.related = read_pairs(c["related"]);
      if (auto x = c.find("expect_valid")) d.expect_valid = x->boolean();
      c.guard([&] { (void)decision_context(d.decisions, d.related); });
      s_.decisions.push_back(std::move(d));
    }
  }

  void checks(const Node& n) {
    for (std::size_t i = 0; i < n.size(); ++i) {
      const std::string name = n[i].str();
      if (!is_check_name(name)) n[i].fail("UnknownCheck", "unknown check '" + name + "'");
      s_.checks.push_back(name);
    }
  }

  Scenario& s_;
};

}  // namespace detail

/// Parses and resolves a scenario document.
inline Scenario load_scenario(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ScenarioError("ParseError", "/", e.what());
  }
  Scenario s;
  detail::Loader(s).load(detail::Node(doc, ""));
  return s;
}

inline Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("IOError", "/", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_scenario(ss.str());
}

// ---------------------------------------------------------------------------
// Serialization

namespace detail {
using ojson = nlohmann::ordered_json;

inline ojson complex_json(Complex z) { return ojson::array({z.real(), z.imag()}); }

inline ojson vector_json(const Vector& v) {
  ojson out = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
  return out;
}

inline ojson matrix_json(const Matrix& m) {
  ojson out = ojson::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ojson row = ojson::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

inline ojson pairs_json(const std::vector<std::pair<std::string, std::string>>& pairs) {
  ojson out = ojson::array();
  for (const auto& [a, b] : pairs) out.push_back(ojson::array({a, b}));
  return out;
}
}  // namespace detail

/// Canonical document for `s`; load_scenario of the result is equal to `s`.
inline std::string serialize_scenario(const Scenario& s) {
  using detail::ojson;
  ojson doc;
  doc["version"] = s.version;
  doc["name"] = s.name;
  if (!s.description.empty()) doc["description"] = s.description;
  doc["phi_space"] = {{"id", s.phi.id()}, {"points", s.phi.points()}};

  ojson vars = ojson::array();
  for (const auto& d : s.variables) {
    ojson v;
    v["id"] = d.variable.id();
    v["values"] = d.variable.table();
    v["accessible"] = d.variable.accessible();
    if (!d.group.empty()) v["group"] = d.group;
    vars.push_back(std::move(v));
  }
  doc["variables"] = std::move(vars);

  if (!s.groups.empty()) {
    ojson gs = ojson::array();
    for (const auto& g : s.groups) {
      ojson j;
      j["id"] = g.id;
      j["acts_on"] = g.acts_on;
      switch (g.source) {
        case GroupDecl::Source::Elements: j["elements"] = g.tables; break;
        case GroupDecl::Source::Generators: j["generators"] = g.tables; break;
        case GroupDecl::Source::Named: j["named"] = g.named; break;
      }
      if (!g.seed.empty()) j["seed"] = g.seed;
      gs.push_back(std::move(j));
    }
    doc["groups"] = std::move(gs);
  }
  if (!s.transformations.empty()) doc["transformations"] = s.transformations;

  if (!s.embeddings.empty()) {
    ojson es = ojson::array();
    for (const auto& e : s.embeddings) {
      ojson values = ojson::object();
      for (const auto& [label, x] : e.values()) values[label] = x;
      es.push_back({{"variable", e.variable()}, {"values", std::move(values)}});
    }
    doc["embeddings"] = std::move(es);
  }

  if (!s.states.empty()) {
    ojson ss = ojson::array();
    for (const auto& st : s.states) {
      ss.push_back({{"id", st.id}, {"amplitudes", detail::vector_json(st.state.amplitudes())}});
    }
    doc["states"] = std::move(ss);
  }

  if (!s.bases.empty()) {
    ojson bs = ojson::array();
    for (const auto& b : s.bases) {
      ojson j;
      j["id"] = b.id;
      switch (b.kind) {
        case BasisDecl::Kind::States: j["states"] = b.states; break;
        case BasisDecl::Kind::Fourier: j["fourier"] = b.fourier; break;
        case BasisDecl::Kind::Eigenbasis: j["eigenbasis"] = b.op; break;
      }
      bs.push_back(std::move(j));
    }
    doc["bases"] = std::move(bs);
  }

  if (!s.operators.empty()) {
    ojson os = ojson::array();
    for (const auto& o : s.operators) {
      ojson j;
      j["id"] = o.id;
      if (!o.represents.empty()) j["represents"] = o.represents;
      switch (o.kind) {
        case OperatorDecl::Kind::Diagonal:
          j["diagonal"] = {{"variable", o.variable}, {"space", o.space}};
          break;
        case OperatorDecl::Kind::Spectral: {
          ojson sp;
          sp["basis"] = o.basis;
          sp["values"] = o.values;
          if (!o.labels.empty()) sp["labels"] = o.labels;
          j["spectral"] = std::move(sp);
          break;
        }
        case OperatorDecl::Kind::Explicit: j["matrix"] = detail::matrix_json(o.matrix); break;
      }
      os.push_back(std::move(j));
    }
    doc["operators"] = std::move(os);
  }

  if (!s.models.empty()) {
    ojson ms = ojson::array();
    for (const auto& d : s.models) {
      ojson j;
      j["id"] = d.model.id;
      j["values"] = d.model.values;
      j["data"] = d.model.data;
      ojson rows = ojson::array();
      for (Eigen::Index z = 0; z < d.model.probabilities.rows(); ++z) {
        ojson row = ojson::array();
        for (Eigen::Index k = 0; k < d.model.probabilities.cols(); ++k) {
          row.push_back(d.model.probabilities(z, k));
        }
        rows.push_back(std::move(row));
      }
      j["probabilities"] = std::move(rows);
      if (!d.model.context.empty()) j["context"] = d.model.context;
      if (!d.basis.empty()) j["basis"] = d.basis;
      ms.push_back(std::move(j));
    }
    doc["likelihood_models"] = std::move(ms);
  }

  if (!s.relations.empty()) {
    ojson rs = ojson::array();
    for (const auto& r : s.relations) {
      ojson j{{"theta", r.theta}, {"eta", r.eta}};
      if (!r.expect.empty()) j["expect"] = r.expect;
      rs.push_back(std::move(j));
    }
    doc["relations"] = std::move(rs);
  }

  ojson ex = ojson::object();
  if (!s.born.empty()) {
    ojson a = ojson::array();
    for (const auto& b : s.born) {
      ojson j{{"id", b.id}, {"a", b.a}, {"b", b.b}};
      if (!b.values.empty()) j["values"] = b.values;
      if (!b.expect.empty()) j["expect"] = b.expect;
      a.push_back(std::move(j));
    }
    ex["born"] = std::move(a);
  }
  if (!s.evidence.empty()) {
    ojson a = ojson::array();
    for (const auto& e : s.evidence) {
      a.push_back({{"id", e.id},
                   {"basis", e.basis},
                   {"first", {{"model", e.first_model}, {"data", e.first_data}}},
                   {"second", {{"model", e.second_model}, {"data", e.second_data}}},
                   {"expect_equivalent", e.expect_equivalent}});
    }
    ex["evidence"] = std::move(a);
  }
  if (!s.coherence.empty()) {
    ojson a = ojson::array();
    for (const auto& c : s.coherence) {
      ojson j{{"id", c.id}, {"projectors", c.projectors}};
      if (c.generate_from.empty()) {
        j["probabilities"] = c.probabilities;
      } else {
        j["generate_from"] = c.generate_from;
      }
      j["expect_coherent"] = c.expect_coherent;
      a.push_back(std::move(j));
    }
    ex["coherence"] = std::move(a);
  }
  if (!s.amplitudes.empty()) {
    ojson a = ojson::array();
    for (const auto& x : s.amplitudes) {
      ojson j{{"id", x.id}, {"samples", x.samples}};
      if (!x.pairs.empty()) {
        ojson ps = ojson::array();
        for (const auto& [c1, c2] : x.pairs) {
          ps.push_back(ojson::array({detail::complex_json(c1), detail::complex_json(c2)}));
        }
        j["pairs"] = std::move(ps);
      }
      a.push_back(std::move(j));
    }
    ex["amplitudes"] = std::move(a);
  }
  if (!s.ozawa.empty()) {
    ojson a = ojson::array();
    for (const auto& o : s.ozawa) {
      ojson j{{"id", o.id}, {"system_dim", o.system_dim}, {"meter_dims", o.meter_dims}};
      ojson ev;
      switch (o.evolution) {
        case OzawaExperiment::Evolution::Copy: ev["copy"] = o.indices; break;
        case OzawaExperiment::Evolution::Permutation: ev["permutation"] = o.indices; break;
        case OzawaExperiment::Evolution::Explicit: ev["matrix"] = detail::matrix_json(o.matrix); break;
        case OzawaExperiment::Evolution::Hamiltonian:
          ev["hamiltonian"] = detail::matrix_json(o.matrix);
          ev["times"] = ojson::array({o.times.first, o.times.second});
          break;
      }
      j["evolution"] = std::move(ev);
      j["pointers"] = o.pointers;
      j["system_observable"] = o.system_observable;
      j["meter_init"] = o.meter_init;
      if (!o.inputs.empty()) j["inputs"] = o.inputs;
      j["sweep"] = o.sweep;
      j["expect_reproducible"] = o.expect_reproducible;
      a.push_back(std::move(j));
    }
    ex["ozawa"] = std::move(a);
  }
  if (!s.chsh.empty()) {
    ojson a = ojson::array();
    for (const auto& c : s.chsh) {
      ojson j{{"id", c.id}, {"state", c.state}};
      if (c.use_angles) {
        j["angles"] = {{"a", ojson::array({c.angles[0], c.angles[1]})},
                       {"b", ojson::array({c.angles[2], c.angles[3]})},
                       {"flip_b", c.flip_b}};
      } else {
        j["settings"] = {{"a", ojson::array({c.settings[0], c.settings[1]})},
                         {"b", ojson::array({c.settings[2], c.settings[3]})}};
      }
      if (c.expect_s) j["expect_s"] = *c.expect_s;
      a.push_back(std::move(j));
    }
    ex["chsh"] = std::move(a);
  }
  if (!s.contexts.empty()) {
    ojson a = ojson::array();
    for (const auto& c : s.contexts) {
      ojson j{{"id", c.id}, {"variables", c.variables}};
      if (c.from_relatedness) {
        j["from_relatedness"] = true;
      } else {
        j["related"] = detail::pairs_json(c.related);
      }
      j["expect_valid"] = c.expect_valid;
      a.push_back(std::move(j));
    }
    ex["context"] = std::move(a);
  }
  if (!s.decisions.empty()) {
    ojson a = ojson::array();
    for (const auto& d : s.decisions) {
      ojson ds = ojson::array();
      for (const auto& v : d.decisions) ds.push_back({{"id", v.id}, {"actions", v.actions}});
      a.push_back({{"id", d.id},
                   {"decisions", std::move(ds)},
                   {"related", detail::pairs_json(d.related)},
                   {"expect_valid", d.expect_valid}});
    }
    ex["decision"] = std::move(a);
  }
  if (!ex.empty()) doc["experiments"] = std::move(ex);
  doc["checks"] = s.checks;
  return doc.dump(2) + "\n";
}

}  // namespace qrecon
