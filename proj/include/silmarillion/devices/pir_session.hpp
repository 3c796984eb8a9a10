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

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "silmarillion/backend/pir_server.hpp"
#include "silmarillion/devices/dongle.hpp"

namespace silmarillion::devices {

struct PirTileQuery {
  LocationId tile;
  std::uint32_t h_tile = 0;
  std::uint32_t l_index = 0;
  // Sealed request per server, in server order.
  std::array<Bytes, backend::kPirServerCount> requests;
};

struct PirSession {
  DeviceId dongle;
  std::uint16_t otp_index = 0;
  std::array<AeadKey, backend::kPirServerCount> keys{};
  std::vector<PirTileQuery> queries;
};

// One query pair per distinct L-tile in the dongle's log. Consumes one OTP;
// both server keys derive from it. Throws AuthenticationError when the
// dongle has no OTPs left.
PirSession make_pir_request(Dongle& dongle, std::uint32_t payload_id, Rng& rng);

// Opens both sealed responses and XORs the shares into the block.
std::optional<Bytes> recover_block(const PirSession& session, ByteSpan response0, ByteSpan response1);

// Parses a retrieved block and probes the dongle's log with it. Returns false
// if the block is malformed or its signature does not verify.
bool apply_block(Dongle& dongle, ByteSpan block, const PublicKey& key);

}  // namespace silmarillion::devices
