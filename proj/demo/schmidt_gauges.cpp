// Copyright 2026 The qgauge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Schmidt-number gauges of random two-qutrit states, and the entanglement of a
// Bell state mixed with a product state.

#include <cstdio>

#include "qgauge/measures.hpp"

int main() {
  using namespace qgauge;
  for (int k = 1; k <= 3; ++k) {
    const TheoryDescriptor th = TheoryDescriptor::schmidt(3, 3, k);
    double mean = 0.0;
    const int count = 200;
    for (int i = 0; i < count; ++i) {
      const StateVector psi = sample_pure({3, 3}, 1000 + i);
      const double g = pure_gauge(psi, th);
      mean += std::max(0.0, g * g - 1.0);
    }
    std::printf("k=%d  mean Gamma^2 - 1 over %d Haar states: %.6f\n", k, count, mean / count);
  }

  CVector bell = CVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const DensityMatrix b(StateVector({2, 2}, bell));
  const DensityMatrix p(StateVector({2, 2}, CVector::Unit(4, 0)));
  const DensityMatrix rho = mix(b, p, 0.5);
  const TheoryDescriptor th = TheoryDescriptor::schmidt(2, 2, 1);
  const MeasureResult roof = convex_roof_upper(rho, th);
  std::printf("negativity %.6f, convex roof of Gamma^2 in [%.6f, %.6f]\n", negativity(rho, 2, 2), roof.lower,
              roof.upper);
  return 0;
}
