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
#include <map>
#include <optional>
#include <vector>

#include "silmarillion/core/rng.hpp"
#include "silmarillion/core/tiling.hpp"
#include "silmarillion/core/types.hpp"

namespace silmarillion::backend {

enum class DeviceType : std::uint8_t { kBeacon = 1, kDongle = 2 };

using Otp = std::array<std::uint8_t, 16>;

inline constexpr std::size_t kDefaultOtpCount = 64;

// From real time `effective` onwards the device's local timer t maps to real
// time t + delta.
struct ClockOffset {
  Minutes effective = 0;
  Minutes delta = 0;

  bool operator==(const ClockOffset&) const = default;
};

struct DeviceRegistration {
  DeviceType type = DeviceType::kBeacon;
  DeviceId id;
  SecretKey key;
  std::uint32_t initial_clock = 0;
  std::vector<ClockOffset> offsets;
  LocationId loc;   // beacons only
  Descriptor desc;  // beacons only
  std::vector<Otp> otps;  // dongles only
};

// Real time of local timer `t` under every offset segment that is
// self-consistent for it: segment k applies if
// offsets[k].effective <= t + delta_k < offsets[k+1].effective.
std::vector<Minutes> candidate_real_times(const DeviceRegistration& reg, Minutes local);

class Registry {
 public:
  // Both kinds start with a zero offset effective at `now`; the initial clock
  // is `now` because device timers start in step with real time.
  const DeviceRegistration& register_beacon(LocationId loc, Descriptor desc, Minutes now, Rng& rng);
  const DeviceRegistration& register_dongle(Minutes now, Rng& rng,
                                            std::size_t otp_count = kDefaultOtpCount);
  // Throws RegistrationError on a duplicate id.
  const DeviceRegistration& add(DeviceRegistration reg);

  const DeviceRegistration* find(DeviceId id) const;
  DeviceRegistration* find(DeviceId id);
  const DeviceRegistration& at(DeviceId id) const;

  // Appends a segment; effective times must increase.
  void append_offset(DeviceId id, ClockOffset offset);

  std::vector<DeviceId> beacons() const;
  std::vector<DeviceId> dongles() const;
  std::size_t size() const { return devices_.size(); }

 private:
  DeviceId next_id();

  std::map<DeviceId, DeviceRegistration> devices_;
  std::uint32_t next_id_ = 1;
};

}  // namespace silmarillion::backend
