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


#pragma once

#include "qgauge/gauges.hpp"
#include "qgauge/linalg.hpp"
#include "qgauge/measures.hpp"
#include "qgauge/solvers/admm.hpp"
#include "qgauge/solvers/cutting_plane.hpp"
#include "qgauge/solvers/ensemble.hpp"
#include "qgauge/solvers/frank_wolfe.hpp"
#include "qgauge/solvers/simplex.hpp"
#include "qgauge/stabilizer.hpp"
#include "qgauge/theories.hpp"
#include "qgauge/theory.hpp"
