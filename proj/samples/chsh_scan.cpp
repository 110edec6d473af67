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

// Rotates Bob's pair of settings against Alice's and prints the CHSH value
// of the singlet. The peak at π/4 sits at the quantum bound.

#include <cmath>
#include <cstdio>

#include "qrecon/experiments.hpp"

int main() {
  using namespace qrecon;
  const double pi = std::acos(-1.0);
  std::printf("classical bound %.0f, quantum bound %.6f\n", classical_chsh_bound(), tsirelson_bound());
  for (int step = 0; step <= 8; ++step) {
    const double offset = step * pi / 16;
    const auto setup = spin_setup(singlet(), pi / 2, 0.0, offset, offset + pi / 2, true);
    std::printf("offset %5.3f  S = % .6f\n", offset, chsh_value(setup).s);
  }
  return 0;
}
