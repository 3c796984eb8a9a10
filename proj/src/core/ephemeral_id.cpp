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

#include "silmarillion/core/ephemeral_id.hpp"

#include <algorithm>

#include "silmarillion/core/bytes.hpp"
#include "silmarillion/core/crypto.hpp"

namespace silmarillion {

EphemeralId derive_ephemeral_id(const SecretKey& sk, LocationId loc, std::uint32_t epoch) {
  std::array<std::uint8_t, 40> input;
  std::copy(sk.bytes.begin(), sk.bytes.end(), input.begin());
  for (int i = 0; i < 4; ++i) {
    input[32 + i] = static_cast<std::uint8_t>(loc.packed >> (24 - 8 * i));
    input[36 + i] = static_cast<std::uint8_t>(epoch >> (24 - 8 * i));
  }
  Digest digest = sha256(input);
  EphemeralId id;
  std::copy(digest.end() - kEphemeralIdSize, digest.end(), id.bytes.begin());
  return id;
}

}  // namespace silmarillion
