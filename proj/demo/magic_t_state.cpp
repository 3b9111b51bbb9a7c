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


// Magic of |T> and |T>|T>: every measure against its known value.

#include <cstdio>

#include "qgauge/measures.hpp"

int main() {
  using namespace qgauge;
  const double root3 = std::sqrt(3.0);
  for (int n : {1, 2}) {
    const TheoryDescriptor th = TheoryDescriptor::magic(n);
    const DensityMatrix rho(t_state(n));
    std::printf("%s, %zu stabilizer states\n", th.to_string().c_str(), stabilizer_set(n).states.size());
    for (const char* name : {"standard_robustness", "generalized_robustness", "random_robustness",
                             "best_free_approximation", "modified_trace_distance", "nuclear_gauge",
                             "geometric_measure", "log_generalized_robustness"}) {
      const MeasureResult r = evaluate_measure(name, rho, th);
      std::printf("  %-28s %.8f  [%s, gap %.1e]\n", name, r.value, to_string(r.status), r.gap());
    }
  }
  std::printf("reference: R_s(T) = %.8f, R_g(T) = %.8f\n", (root3 - 1) / 2, 2 - root3);
  return 0;
}
