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

#include "silmarillion/core/bytes.hpp"
#include "silmarillion/core/tiling.hpp"
#include "silmarillion/core/types.hpp"

namespace silmarillion {

inline constexpr std::size_t kBroadcastSize = 31;
inline constexpr std::size_t kEncounterSize = 38;

// One beacon advertisement:
// eph(15) || beacon(4) || loc(4) || desc(4) || clock(4), big-endian.
struct BeaconBroadcast {
  EphemeralId eph;
  DeviceId beacon;
  LocationId loc;
  Descriptor desc;
  std::uint32_t clock = 0;

  bool operator==(const BeaconBroadcast&) const = default;
};

// One persisted dongle log entry:
// eph(15) || beacon(4) || loc(4) || desc(4) || t_start_b(4) || t_int_b(1) ||
// t_start_d(4) || t_int_d(1) || rssi(1), big-endian.
struct EncounterRecord {
  EphemeralId eph;
  DeviceId beacon;
  LocationId loc;
  Descriptor desc;
  std::uint32_t t_start_b = 0;
  std::uint8_t t_int_b = 0;
  std::uint32_t t_start_d = 0;
  std::uint8_t t_int_d = 0;
  std::int8_t rssi = 0;

  bool operator==(const EncounterRecord&) const = default;
};

// Interval fields saturate at 255 minutes.
std::uint8_t saturate_interval(std::int64_t minutes);

Bytes serialize_broadcast(const BeaconBroadcast& b);
BeaconBroadcast parse_broadcast(ByteSpan bytes);

Bytes serialize_encounter(const EncounterRecord& e);
void append_encounter(Bytes& out, const EncounterRecord& e);
EncounterRecord parse_encounter(ByteSpan bytes);

}  // namespace silmarillion
