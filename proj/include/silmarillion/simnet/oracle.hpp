// Copyright 2026 The Silmarillion Authors
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

#include "silmarillion/simnet/metrics.hpp"
#include "silmarillion/simnet/scenario.hpp"

namespace silmarillion::simnet {

// Expected true-positive exposures computed directly from the mobility
// traces, without running any device or backend code.  Assumes perfect
// reception, no crashes and that no log overflows; with the overlap filter
// on, the user's first minute in the epoch must fall inside the span covered
// by the uploaded encounters still retained that day.
ExposureSet brute_force_exposures(const Scenario& s);

}  // namespace silmarillion::simnet
