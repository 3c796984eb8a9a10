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

#include <cstdint>

#include "silmarillion/core/tiling.hpp"
#include "silmarillion/core/types.hpp"

namespace silmarillion {

// Low 15 bytes of SHA-256(sk[32] || loc big-endian[4] || epoch big-endian[4]).
EphemeralId derive_ephemeral_id(const SecretKey& sk, LocationId loc, std::uint32_t epoch);

}  // namespace silmarillion
