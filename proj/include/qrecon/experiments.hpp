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
 * Small simulations: a system coupled to pointer meters (reproducibility of
 * marginals and agreement of two meters), context graphs of related
 * variables, and CHSH correlators.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qrecon/errors.hpp"
#include "qrecon/groups.hpp"
#include "qrecon/linalg.hpp"
#include "qrecon/operators.hpp"
#include "qrecon/probability.hpp"
#include "qrecon/relatedness.hpp"
#include "qrecon/variables.hpp"

namespace qrecon {

// ---------------------------------------------------------------------------
// Measurement model

/// Tensor factors ordered system, meter 1, meter 2, ...
struct MeasurementScenario {
  std::size_t system_dim = 0;
  std::vector<std::size_t> meter_dims;
  /// Fixed coupling U, used when no Hamiltonian is given.
  Matrix evolution;
  /// If present, U(t) = exp(−iHt) and `evolution` is ignored.
  std::optional<Matrix> hamiltonian;
  /// One per meter, acting on that meter's factor only.
  std::vector<HermitianOperator> pointers;
  /// Acts on the system factor.
  HermitianOperator system_observable;
  /// Initial pointer-basis index of each meter.
  std::vector<std::size_t> meter_init;

  std::size_t total_dim() const {
    std::size_t d = system_dim;
    for (auto m : meter_dims) d *= m;
    return d;
  }

  void validate() const {
    if (system_dim == 0 || meter_dims.empty()) throw ModelError("scenario needs a system and meters");
    if (pointers.size() != meter_dims.size() || meter_init.size() != meter_dims.size()) {
      throw ModelError("one pointer observable and initial index per meter is required");
    }
    if (system_observable.dimension() != system_dim) {
      throw DimensionError("system observable does not act on the system factor");
    }
    for (std::size_t i = 0; i < meter_dims.size(); ++i) {
      if (pointers[i].dimension() != meter_dims[i]) {
        throw DimensionError("pointer " + std::to_string(i + 1) + " does not act on its meter");
      }
      if (meter_init[i] >= meter_dims[i]) throw ModelError("meter initial index out of range");
    }
    const auto n = static_cast<Eigen::Index>(total_dim());
    if (hamiltonian) {
      if (hamiltonian->rows() != n || hamiltonian->cols() != n) {
        throw DimensionError("Hamiltonian does not act on the full tensor space");
      }
      if (hermiticity_defect(*hamiltonian) > tol::kExact) {
        throw HermiticityError("Hamiltonian is not Hermitian");
      }
    } else {
      if (evolution.rows() != n || evolution.cols() != n) {
        throw DimensionError("evolution does not act on the full tensor space");
      }
      if (unitarity_defect(evolution) > tol::kExact) throw ModelError("evolution is not unitary");
    }
  }

  Matrix unitary(double t) const {
    if (!hamiltonian) return evolution;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (*hamiltonian + hamiltonian->adjoint()));
    Vector phases(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < phases.size(); ++i) {
      phases(i) = std::polar(1.0, -es.eigenvalues()(i) * t);
    }
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  }

  /// I ⊗ .. ⊗ op ⊗ .. ⊗ I with `op` on factor `index` (0 = system).
  Matrix lift(const Matrix& op, std::size_t index) const {
    std::vector<std::size_t> dims{system_dim};
    dims.insert(dims.end(), meter_dims.begin(), meter_dims.end());
    Matrix out = Matrix::Identity(1, 1);
    for (std::size_t f = 0; f < dims.size(); ++f) {
      const auto d = static_cast<Eigen::Index>(dims[f]);
      out = kron(out, f == index ? op : Matrix(Matrix::Identity(d, d)));
    }
    return out;
  }

  /// ρ_system ⊗ |m1><m1| ⊗ |m2><m2| ⊗ ...
  DensityOperator prepare(const DensityOperator& system) const {
    if (system.dimension() != system_dim) throw DimensionError("input is not a system state");
    Matrix rho = system.matrix();
    for (std::size_t i = 0; i < meter_dims.size(); ++i) {
      const Vector ket = pointers[i].eigenvectors().col(static_cast<Eigen::Index>(meter_init[i]));
      rho = kron(rho, outer(ket));
    }
    return DensityOperator(0.5 * (rho + rho.adjoint()));
  }
};

/// Outcome distributions over the system observable's eigenvalues.
struct Reproducibility {
  bool reproducible = false;
  std::vector<double> values;
  std::vector<double> system;
  /// meters[i][x] = P(M_i(τ_i) = x)
  std::vector<std::vector<double>> meters;
  double max_defect = 0.0;
};

namespace detail {
inline void require_same_values(const std::vector<Eigenspace>& a, const std::vector<Eigenspace>& b,
                                const std::string& what) {
  bool same = a.size() == b.size();
  for (std::size_t i = 0; same && i < a.size(); ++i) {
    same = std::abs(a[i].value - b[i].value) <= tol::kSpectral * std::max(1.0, std::abs(a[i].value));
  }
  if (!same) throw SpectrumError(what + " has a different eigenvalue set than the system observable");
}

/// U† (lifted P_x) U for each eigenvalue of meter `m`'s pointer.
inline std::vector<Matrix> evolved_projectors(const MeasurementScenario& s, std::size_t m,
                                              double t) {
  const Matrix u = s.unitary(t);
  std::vector<Matrix> out;
  for (const auto& es : s.pointers[m].eigenspaces()) {
    out.push_back(u.adjoint() * s.lift(s.pointers[m].projector(es), m + 1) * u);
  }
  return out;
}

inline double probability(const DensityOperator& rho, const Matrix& p) {
  return (rho.matrix() * p).trace().real();
}
}  // namespace detail

/// P(M_i(τ_i) = x) against P(A(0) = x) for every eigenvalue x of A.
inline Reproducibility reproducibility(const MeasurementScenario& s, const DensityOperator& input,
                                       std::pair<double, double> times = {1.0, 1.0}) {
  s.validate();
  if (input.dimension() != s.total_dim()) {
    throw DimensionError("input does not live on the full tensor space");
  }
  const auto sys_spaces = s.system_observable.eigenspaces();
  Reproducibility r;
  for (const auto& es : sys_spaces) {
    r.values.push_back(es.value);
    r.system.push_back(detail::probability(input, s.lift(s.system_observable.projector(es), 0)));
  }
  for (std::size_t m = 0; m < s.meter_dims.size(); ++m) {
    detail::require_same_values(s.pointers[m].eigenspaces(), sys_spaces,
                                "pointer " + std::to_string(m + 1));
    const double t = m == 0 ? times.first : times.second;
    std::vector<double> dist;
    for (const auto& p : detail::evolved_projectors(s, m, t)) {
      dist.push_back(detail::probability(input, p));
    }
    for (std::size_t x = 0; x < dist.size(); ++x) {
      r.max_defect = std::max(r.max_defect, std::abs(dist[x] - r.system[x]));
    }
    r.meters.push_back(std::move(dist));
  }
  r.reproducible = r.max_defect <= tol::kProbability;
  return r;
}

inline bool check_reproducibility(const MeasurementScenario& s, const DensityOperator& input,
                                  std::pair<double, double> times = {1.0, 1.0}) {
  return reproducibility(s, input, times).reproducible;
}

struct JointDistribution {
  std::vector<double> values;
  /// p(x, y) for M1 = values[x], M2 = values[y].
  Eigen::MatrixXd p;
  double max_off_diagonal = 0.0;
  double commutator_norm = 0.0;
};

/// Joint distribution of the two evolved pointers. Requires reproducibility
/// for this input and commuting evolved pointers.
inline JointDistribution intersubjectivity_joint(const MeasurementScenario& s,
                                                 const DensityOperator& input,
                                                 std::pair<double, double> times = {1.0, 1.0}) {
  if (s.meter_dims.size() != 2) throw ModelError("two meters are required");
  const auto rep = reproducibility(s, input, times);
  if (!rep.reproducible) {
    throw PreconditionError("marginals are not reproducible (defect " +
                            std::to_string(rep.max_defect) + ")");
  }
  const auto q1 = detail::evolved_projectors(s, 0, times.first);
  const auto q2 = detail::evolved_projectors(s, 1, times.second);
  const Matrix u1 = s.unitary(times.first);
  const Matrix u2 = s.unitary(times.second);
  const Matrix m1 = u1.adjoint() * s.lift(s.pointers[0].matrix(), 1) * u1;
  const Matrix m2 = u2.adjoint() * s.lift(s.pointers[1].matrix(), 2) * u2;
  JointDistribution j;
  j.commutator_norm = (m1 * m2 - m2 * m1).norm();
  if (j.commutator_norm > tol::kSpectral) {
    throw ModelError("evolved pointers do not commute (‖[M1, M2]‖ = " +
                     std::to_string(j.commutator_norm) + ")");
  }
  j.values = rep.values;
  const auto n = static_cast<Eigen::Index>(q1.size());
  j.p = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = 0; y < n; ++y) {
      const double v = detail::probability(input, q1[std::size_t(x)] * q2[std::size_t(y)]);
      j.p(x, y) = v;
      if (x != y) j.max_off_diagonal = std::max(j.max_off_diagonal, std::abs(v));
    }
  }
  return j;
}

/// Pointer-style observable diag(+1, −1) on a qubit, labelled "0" and "1".
inline HermitianOperator qubit_pointer() {
  return HermitianOperator(pauli::z(), {{1.0, "0"}, {-1.0, "1"}});
}

/// Permutation unitary on qubits (system first) flipping each target in
/// `targets` when the system qubit is 1.
inline Matrix copy_circuit(std::size_t meters, const std::vector<std::size_t>& targets) {
  const std::size_t n = std::size_t{1} << (meters + 1);
  std::vector<std::size_t> image(n);
  for (std::size_t b = 0; b < n; ++b) {
    std::size_t out = b;
    if (b >> meters & 1U) {
      for (auto t : targets) out ^= std::size_t{1} << (meters - 1 - t);
    }
    image[b] = out;
  }
  return permutation_matrix(image);
}

/// Qubit system copied onto two qubit meters by two controlled flips.
inline MeasurementScenario copy_scenario(std::vector<std::size_t> coupled = {0, 1}) {
  MeasurementScenario s;
  s.system_dim = 2;
  s.meter_dims = {2, 2};
  s.evolution = copy_circuit(2, coupled);
  s.pointers = {qubit_pointer(), qubit_pointer()};
  s.system_observable = qubit_pointer();
  // Eigenvalues ascend, so column 1 of diag(+1, −1) is |0>.
  s.meter_init = {1, 1};
  return s;
}

/// Computational states |j>, plus (|j>+|k>)/√2 and (|j>+i|k>)/√2 for j < k.
/// These projectors span all operators, so agreement on them is agreement
/// on every input.
inline std::vector<StateVector> sweep_inputs(std::size_t d) {
  std::vector<StateVector> out;
  const auto n = static_cast<Eigen::Index>(d);
  for (Eigen::Index j = 0; j < n; ++j) out.push_back(StateVector::basis(d, std::size_t(j)));
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j + 1; k < n; ++k) {
      Vector v = Vector::Zero(n);
      v(j) = 1.0;
      v(k) = 1.0;
      out.push_back(StateVector::normalized(v));
      v(k) = Complex(0, 1);
      out.push_back(StateVector::normalized(v));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Context graphs

struct ContextViolation {
  std::string theta;
  std::string eta;
  std::string lambda;
  friend bool operator==(const ContextViolation&, const ContextViolation&) = default;
  friend auto operator<=>(const ContextViolation&, const ContextViolation&) = default;
};

struct ContextReport {
  bool valid = true;
  std::vector<ContextViolation> violations;
};

/// Maximal variables held at once, with symmetric relatedness edges.
class ContextGraph {
 public:
  ContextGraph() = default;
  explicit ContextGraph(std::vector<std::string> variables) : vars_(std::move(variables)) {
    std::set<std::string> seen;
    for (const auto& v : vars_) {
      if (!seen.insert(v).second) throw ContextError("variable '" + v + "' declared twice");
    }
  }

  void relate(const std::string& a, const std::string& b) {
    require(a);
    require(b);
    if (a == b) throw ContextError("variable '" + a + "' cannot be related to itself");
    edges_.insert(key(a, b));
  }

  void unrelate(const std::string& a, const std::string& b) { edges_.erase(key(a, b)); }

  bool related(const std::string& a, const std::string& b) const {
    return edges_.count(key(a, b)) != 0;
  }

  const std::vector<std::string>& variables() const noexcept { return vars_; }
  const std::set<std::pair<std::string, std::string>>& edges() const noexcept { return edges_; }

  friend bool operator==(const ContextGraph&, const ContextGraph&) = default;

 private:
  static std::pair<std::string, std::string> key(const std::string& a, const std::string& b) {
    return a < b ? std::pair{a, b} : std::pair{b, a};
  }
  void require(const std::string& v) const {
    if (std::find(vars_.begin(), vars_.end(), v) == vars_.end()) {
      throw ContextError("variable '" + v + "' is not declared in the context");
    }
  }

  std::vector<std::string> vars_;
  std::set<std::pair<std::string, std::string>> edges_;
};

/// Every triple where θ is related to both η and λ while η and λ are not
/// related; η precedes λ in declaration order.
inline ContextReport validate_context(const ContextGraph& g) {
  ContextReport r;
  const auto& v = g.variables();
  for (const auto& theta : v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      for (std::size_t j = i + 1; j < v.size(); ++j) {
        if (v[i] == theta || v[j] == theta) continue;
        if (g.related(theta, v[i]) && g.related(theta, v[j]) && !g.related(v[i], v[j])) {
          r.violations.push_back({theta, v[i], v[j]});
        }
      }
    }
  }
  r.valid = r.violations.empty();
  return r;
}

/// Edges between variables that find_relation classifies as related
/// (directly or through a relabelling). Pairs with different value counts
/// are not related.
inline ContextGraph context_from_variables(const std::vector<TheoreticalVariable>& vars,
                                           const GroupAction& m) {
  std::vector<std::string> ids;
  for (const auto& v : vars) ids.push_back(v.id());
  ContextGraph g(ids);
  for (std::size_t a = 0; a < vars.size(); ++a) {
    for (std::size_t b = a + 1; b < vars.size(); ++b) {
      if (vars[a].cardinality() != vars[b].cardinality()) continue;
      const auto s = find_relation(vars[a], vars[b], m).status;
      if (s == RelationStatus::Related || s == RelationStatus::RelatedViaSurrogate) {
        g.relate(vars[a].id(), vars[b].id());
      }
    }
  }
  return g;
}

/// θ = j when action a_j is chosen.
struct DecisionVariable {
  std::string id;
  std::size_t actions = 0;
};

struct DecisionReport {
  bool valid = true;
  std::vector<ContextViolation> violations;
  std::vector<std::string> messages;
};

inline DecisionReport decision_context(
    const std::vector<DecisionVariable>& decisions,
    const std::vector<std::pair<std::string, std::string>>& related_pairs) {
  std::vector<std::string> ids;
  for (const auto& d : decisions) {
    if (d.actions == 0) throw ContextError("decision '" + d.id + "' has no actions");
    ids.push_back(d.id);
  }
  ContextGraph g(ids);
  for (const auto& [a, b] : related_pairs) g.relate(a, b);
  const auto ctx = validate_context(g);
  DecisionReport r{ctx.valid, ctx.violations, {}};
  for (const auto& v : ctx.violations) {
    r.messages.push_back("decisions '" + v.eta + "' and '" + v.lambda +
                         "' are both related to '" + v.theta +
                         "' but not to each other; they cannot be held together");
  }
  return r;
}

// ---------------------------------------------------------------------------
// CHSH

/// Two ±1-valued settings per side on a bipartite pure state.
struct CHSHSetup {
  StateVector state;
  std::array<Matrix, 2> a;
  std::array<Matrix, 2> b;

  void validate() const {
    auto check = [](const Matrix& m, const char* who) {
      if (m.rows() == 0 || m.rows() != m.cols()) throw SetupError(std::string(who) + " is not square");
      if (hermiticity_defect(m) > tol::kProbability) {
        throw SetupError(std::string(who) + " is not Hermitian");
      }
      const auto n = m.rows();
      if ((m * m - Matrix::Identity(n, n)).norm() > tol::kProbability) {
        throw SetupError(std::string(who) + " does not square to the identity");
      }
    };
    check(a[0], "A1");
    check(a[1], "A2");
    check(b[0], "B1");
    check(b[1], "B2");
    if (a[0].rows() != a[1].rows() || b[0].rows() != b[1].rows()) {
      throw SetupError("settings on one side have different dimensions");
    }
    if (std::size_t(a[0].rows() * b[0].rows()) != state.dimension()) {
      throw SetupError("state dimension is not d_A · d_B");
    }
  }
};

struct CHSHResult {
  double s = 0.0;
  /// correlators[i][j] = E(A_{i+1} B_{j+1})
  std::array<std::array<double, 2>, 2> correlators{};
  bool within_tsirelson = true;
};

inline double tsirelson_bound() { return 2.0 * std::sqrt(2.0); }

/// S = E11 + E12 + E21 − E22.
inline double chsh_combination(double e11, double e12, double e21, double e22) {
  return e11 + e12 + e21 - e22;
}

inline CHSHResult chsh_value(const CHSHSetup& setup) {
  setup.validate();
  CHSHResult r;
  const Vector& psi = setup.state.amplitudes();
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      r.correlators[i][j] = psi.dot(kron(setup.a[i], setup.b[j]) * psi).real();
    }
  }
  r.s = chsh_combination(r.correlators[0][0], r.correlators[0][1], r.correlators[1][0],
                         r.correlators[1][1]);
  r.within_tsirelson = std::abs(r.s) <= tsirelson_bound() + tol::kSpectral;
  return r;
}

/// S for the deterministic local strategy with outcomes a1, a2, b1, b2.
inline int chsh_strategy(int a1, int a2, int b1, int b2) {
  return a1 * b1 + a1 * b2 + a2 * b1 - a2 * b2;
}

/// {min, max} of S over all 16 deterministic ±1 strategies.
inline std::pair<int, int> classical_chsh_range() {
  int lo = 4;
  int hi = -4;
  for (unsigned mask = 0; mask < 16; ++mask) {
    auto bit = [&](unsigned k) { return (mask >> k & 1U) ? -1 : 1; };
    const int s = chsh_strategy(bit(0), bit(1), bit(2), bit(3));
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  return {lo, hi};
}

inline double classical_chsh_bound() { return double(classical_chsh_range().second); }

/// cos(angle) σ_z + sin(angle) σ_x.
inline Matrix spin_observable(double angle) {
  return std::cos(angle) * pauli::z() + std::sin(angle) * pauli::x();
}

/// (|01> − |10>)/√2.
inline StateVector singlet() {
  Vector v = Vector::Zero(4);
  v(1) = 1.0;
  v(2) = -1.0;
  return StateVector::normalized(v);
}

/// Spin settings in the x–z plane. With `flip_b`, Bob reports the opposite
/// sign, so that the singlet's anti-correlated outcomes count as agreement.
inline CHSHSetup spin_setup(const StateVector& state, double a1, double a2, double b1, double b2,
                            bool flip_b = false) {
  const double sb = flip_b ? -1.0 : 1.0;
  return CHSHSetup{state,
                   {spin_observable(a1), spin_observable(a2)},
                   {Matrix(sb * spin_observable(b1)), Matrix(sb * spin_observable(b2))}};
}

}  // namespace qrecon
