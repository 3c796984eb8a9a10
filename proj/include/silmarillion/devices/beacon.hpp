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
#include <optional>

#include "silmarillion/backend/registry.hpp"
#include "silmarillion/core/clock.hpp"
#include "silmarillion/core/wire.hpp"

namespace silmarillion::devices {

// A BLE beacon. The timer advances one unit per real minute while powered;
// after a crash it resumes from the last persisted value plus one.
class Beacon {
 public:
  Beacon(const backend::DeviceRegistration& reg, Minutes now,
         std::uint32_t epoch_len = kDefaultEpochMinutes);

  // Advances the timer to `now` and returns the advertisement for the
  // current minute, or nothing while the beacon is down.
  std::optional<BeaconBroadcast> tick(Minutes now);

  void crash(Minutes now);
  void reboot(Minutes now);
  bool up() const { return up_; }

  DeviceId id() const { return id_; }
  LocationId loc() const { return loc_; }
  const DeviceClock& clock() const { return clock_; }
  std::uint32_t epoch() const { return epoch_; }
  const EphemeralId& current_eph() const { return eph_; }

 private:
  void refresh_eph();

  DeviceId id_;
  SecretKey key_;
  LocationId loc_;
  Descriptor desc_;
  DeviceClock clock_;
  Minutes last_tick_;
  bool up_ = true;
  std::uint32_t persisted_ = 0;
  std::uint32_t epoch_ = 0;
  EphemeralId eph_;
};

}  // namespace silmarillion::devices
