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

// Two binary variables on four points, related by a transposition. The
// sample finds the relating element, conjugates one operator into the
// other and then contrasts a complementary pair that cannot commute.

#include <iostream>

#include "qrecon/qrecon.hpp"

using namespace qrecon;

int main() {
  const VariableSpace phi("Omega", {"p0", "p1", "p2", "p3"});
  const TheoreticalVariable theta("theta", phi, {"0", "0", "1", "1"});
  const TheoreticalVariable eta("eta", phi, {"0", "1", "0", "1"});
  const auto m = GroupAction::symmetric("S4", phi);

  const auto r = find_relation(theta, eta, m);
  std::cout << "theta vs eta: " << to_string(r.status) << ", first witness "
            << m.element(*r.witness).cycles() << " (" << r.witness_count << " witnesses)\n";

  const auto space = phi_function_space(phi);
  const auto a_theta = build_operator(theta, NumericEmbedding::natural(theta), space).op;
  const auto c = conjugate_by_relation(a_theta, theta, eta, m, m.element(*r.witness), space);
  std::cout << "conjugated operator matches eta's partition: " << std::boolalpha << c.partition_matches
            << " (defect " << c.partition_defect << ")\n";

  // Diagonal and Fourier-basis operators on a qubit: not in bijection, so
  // they must fail to commute.
  const HermitianOperator z(pauli::z());
  const auto x = spectral_operator(fourier_basis(2), {1.0, -1.0});
  std::cout << "||[Z, X]||_F = " << commutator_check(z, x).norm << "\n";
  return 0;
}
