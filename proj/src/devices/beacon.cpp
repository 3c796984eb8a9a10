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

#include "silmarillion/devices/beacon.hpp"

#include "silmarillion/core/ephemeral_id.hpp"
#include "silmarillion/core/errors.hpp"

namespace silmarillion::devices {

Beacon::Beacon(const backend::DeviceRegistration& reg, Minutes now, std::uint32_t epoch_len)
    : id_(reg.id), key_(reg.key), loc_(reg.loc), desc_(reg.desc), last_tick_(now) {
  if (reg.type != backend::DeviceType::kBeacon) throw ParameterError("registration is not a beacon");
  clock_.initial = reg.initial_clock;
  clock_.timer = static_cast<std::uint32_t>(Minutes{reg.initial_clock} + (now - reg.offsets.front().effective));
  clock_.epoch_len = epoch_len;
  epoch_ = epoch_of(clock_);
  eph_ = derive_ephemeral_id(key_, loc_, epoch_);
}

void Beacon::refresh_eph() {
  const std::uint32_t e = epoch_of(clock_);
  if (e != epoch_) {
    epoch_ = e;
    eph_ = derive_ephemeral_id(key_, loc_, epoch_);
  }
}

std::optional<BeaconBroadcast> Beacon::tick(Minutes now) {
  if (now < last_tick_) throw ParameterError("beacon time moved backwards");
  if (!up_) {
    last_tick_ = now;
    return std::nullopt;
  }
  clock_.timer += static_cast<std::uint32_t>(now - last_tick_);
  last_tick_ = now;
  refresh_eph();
  return BeaconBroadcast{eph_, id_, loc_, desc_, clock_.timer};
}

void Beacon::crash(Minutes now) {
  tick(now);
  persisted_ = persisted_timer(clock_);
  up_ = false;
}

void Beacon::reboot(Minutes now) {
  if (up_) return;
  last_tick_ = now;
  up_ = true;
  clock_.timer = persisted_ + 1;
  refresh_eph();
}

}  // namespace silmarillion::devices
