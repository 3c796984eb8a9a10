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

#include "silmarillion/core/wire.hpp"

#include <algorithm>
#include <string>

#include "silmarillion/core/errors.hpp"

namespace silmarillion {

namespace {

void expect_size(ByteSpan bytes, std::size_t size, const char* what) {
  if (bytes.size() != size) {
    throw FormatError(std::string(what) + " must be exactly " + std::to_string(size) +
                      " bytes, got " + std::to_string(bytes.size()));
  }
}

EphemeralId read_eph(ByteReader& r) {
  EphemeralId eph;
  ByteSpan raw = r.bytes(kEphemeralIdSize);
  std::copy(raw.begin(), raw.end(), eph.bytes.begin());
  return eph;
}

}  // namespace

std::uint8_t saturate_interval(std::int64_t minutes) {
  return static_cast<std::uint8_t>(std::clamp<std::int64_t>(minutes, 0, 255));
}

Bytes serialize_broadcast(const BeaconBroadcast& b) {
  Bytes out;
  out.reserve(kBroadcastSize);
  ByteWriter w(out);
  w.bytes(b.eph.bytes);
  w.u32(b.beacon.value);
  w.u32(b.loc.packed);
  w.u32(b.desc.value);
  w.u32(b.clock);
  return out;
}

BeaconBroadcast parse_broadcast(ByteSpan bytes) {
  expect_size(bytes, kBroadcastSize, "beacon broadcast");
  ByteReader r(bytes);
  BeaconBroadcast b;
  b.eph = read_eph(r);
  b.beacon.value = r.u32();
  b.loc.packed = r.u32();
  b.desc.value = r.u32();
  b.clock = r.u32();
  return b;
}

void append_encounter(Bytes& out, const EncounterRecord& e) {
  ByteWriter w(out);
  w.bytes(e.eph.bytes);
  w.u32(e.beacon.value);
  w.u32(e.loc.packed);
  w.u32(e.desc.value);
  w.u32(e.t_start_b);
  w.u8(e.t_int_b);
  w.u32(e.t_start_d);
  w.u8(e.t_int_d);
  w.u8(static_cast<std::uint8_t>(e.rssi));
}

Bytes serialize_encounter(const EncounterRecord& e) {
  Bytes out;
  out.reserve(kEncounterSize);
  append_encounter(out, e);
  return out;
}

EncounterRecord parse_encounter(ByteSpan bytes) {
  expect_size(bytes, kEncounterSize, "encounter record");
  ByteReader r(bytes);
  EncounterRecord e;
  e.eph = read_eph(r);
  e.beacon.value = r.u32();
  e.loc.packed = r.u32();
  e.desc.value = r.u32();
  e.t_start_b = r.u32();
  e.t_int_b = r.u8();
  e.t_start_d = r.u32();
  e.t_int_d = r.u8();
  e.rssi = static_cast<std::int8_t>(r.u8());
  return e;
}

}  // namespace silmarillion
