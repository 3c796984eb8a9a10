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

#include "silmarillion/devices/network_beacon.hpp"

#include <algorithm>

#include "silmarillion/core/errors.hpp"

namespace silmarillion::devices {

std::vector<BroadcastPacket> packetize(ByteSpan payload_wire, std::uint32_t payload_id) {
  const std::size_t total = (payload_wire.size() + kPacketDataSize - 1) / kPacketDataSize;
  if (total == 0 || total > 0xffff) {
    throw ParameterError("payload of " + std::to_string(payload_wire.size()) + " bytes cannot be packetized");
  }
  std::vector<BroadcastPacket> out;
  out.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    const std::size_t off = i * kPacketDataSize;
    const std::size_t len = std::min(kPacketDataSize, payload_wire.size() - off);
    out.push_back({payload_id, static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(total),
                   Bytes(payload_wire.begin() + off, payload_wire.begin() + off + len)});
  }
  return out;
}

void NetworkBeacon::cache(std::uint32_t payload_id, ByteSpan payload_wire) {
  payload_id_ = payload_id;
  packets_ = packetize(payload_wire, payload_id);
  cursor_ = 0;
  cycles_ = 0;
}

const BroadcastPacket& NetworkBeacon::next_packet() {
  if (packets_.empty()) throw ParameterError("network beacon has no cached payload");
  const BroadcastPacket& p = packets_[cursor_];
  if (++cursor_ == packets_.size()) {
    cursor_ = 0;
    ++cycles_;
  }
  return p;
}

std::vector<BroadcastPacket> NetworkBeacon::cycle() {
  std::vector<BroadcastPacket> out;
  out.reserve(packets_.size());
  for (std::size_t i = 0; i < packets_.size(); ++i) out.push_back(next_packet());
  return out;
}

Bytes NetworkBeacon::relay(ByteSpan request, backend::PirServer& server, const backend::Registry& registry,
                           Rng& rng) {
  if (tap_) tap_(request);
  Bytes response = server.handle_session(request, registry, rng);
  if (tap_) tap_(response);
  relayed_bytes_ += request.size() + response.size();
  return response;
}

}  // namespace silmarillion::devices
