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
#include <functional>
#include <vector>

#include "silmarillion/backend/pir_server.hpp"
#include "silmarillion/core/bytes.hpp"
#include "silmarillion/core/tiling.hpp"

namespace silmarillion::devices {

inline constexpr std::size_t kPacketDataSize = 250;

// One periodic-broadcast packet. `index` and `total` are link-layer framing;
// `data` is at most kPacketDataSize bytes of the signed payload.
struct BroadcastPacket {
  std::uint32_t payload_id = 0;
  std::uint16_t index = 0;
  std::uint16_t total = 0;
  Bytes data;
  bool operator==(const BroadcastPacket&) const = default;
};

std::vector<BroadcastPacket> packetize(ByteSpan payload_wire, std::uint32_t payload_id);

// A powered, connected beacon: caches the day's payload for its tile, cycles
// it over the broadcast channel and relays encrypted PIR sessions.
class NetworkBeacon {
 public:
  explicit NetworkBeacon(LocationId loc) : loc_(loc) {}

  LocationId loc() const { return loc_; }

  void cache(std::uint32_t payload_id, ByteSpan payload_wire);
  bool has_payload() const { return !packets_.empty(); }
  std::uint32_t payload_id() const { return payload_id_; }
  std::size_t packets_per_cycle() const { return packets_.size(); }
  Minutes cycle_period(Minutes packet_interval) const {
    return static_cast<Minutes>(packets_.size()) * packet_interval;
  }

  // Next packet in the cycle; wraps to packet 0 after the last.
  const BroadcastPacket& next_packet();
  // One full cycle starting at the cursor.
  std::vector<BroadcastPacket> cycle();
  std::size_t cycles_completed() const { return cycles_; }

  // Forwards an opaque session to one PIR server. Every byte the beacon sees
  // passes through the tap, if set.
  Bytes relay(ByteSpan request, backend::PirServer& server, const backend::Registry& registry, Rng& rng);
  void set_tap(std::function<void(ByteSpan)> tap) { tap_ = std::move(tap); }
  std::size_t relayed_bytes() const { return relayed_bytes_; }

 private:
  LocationId loc_;
  std::uint32_t payload_id_ = 0;
  std::vector<BroadcastPacket> packets_;
  std::size_t cursor_ = 0;
  std::size_t cycles_ = 0;
  std::function<void(ByteSpan)> tap_;
  std::size_t relayed_bytes_ = 0;
};

}  // namespace silmarillion::devices
