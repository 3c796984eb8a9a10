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

#include "silmarillion/backend/registry.hpp"

#include <string>

#include "silmarillion/core/errors.hpp"

namespace silmarillion::backend {

std::vector<Minutes> candidate_real_times(const DeviceRegistration& reg, Minutes local) {
  std::vector<Minutes> out;
  for (std::size_t k = 0; k < reg.offsets.size(); ++k) {
    const Minutes real = local + reg.offsets[k].delta;
    if (real < reg.offsets[k].effective && k != 0) continue;
    if (k + 1 < reg.offsets.size() && real >= reg.offsets[k + 1].effective) continue;
    out.push_back(real);
  }
  return out;
}

DeviceId Registry::next_id() {
  while (devices_.count(DeviceId{next_id_})) ++next_id_;
  return DeviceId{next_id_++};
}

const DeviceRegistration& Registry::register_beacon(LocationId loc, Descriptor desc, Minutes now,
                                                    Rng& rng) {
  DeviceRegistration reg;
  reg.type = DeviceType::kBeacon;
  reg.id = next_id();
  rng.fill(reg.key.bytes);
  reg.initial_clock = static_cast<std::uint32_t>(now);
  reg.offsets.push_back({now, 0});
  reg.loc = loc;
  reg.desc = desc;
  return add(std::move(reg));
}

const DeviceRegistration& Registry::register_dongle(Minutes now, Rng& rng, std::size_t otp_count) {
  DeviceRegistration reg;
  reg.type = DeviceType::kDongle;
  reg.id = next_id();
  rng.fill(reg.key.bytes);
  reg.initial_clock = static_cast<std::uint32_t>(now);
  reg.offsets.push_back({now, 0});
  reg.otps.resize(otp_count);
  for (Otp& otp : reg.otps) rng.fill(otp);
  return add(std::move(reg));
}

const DeviceRegistration& Registry::add(DeviceRegistration reg) {
  if (reg.offsets.empty()) throw RegistrationError("registration without a clock offset");
  const DeviceId id = reg.id;
  auto [it, inserted] = devices_.emplace(id, std::move(reg));
  if (!inserted) throw RegistrationError("device id " + std::to_string(id.value) + " already registered");
  return it->second;
}

const DeviceRegistration* Registry::find(DeviceId id) const {
  auto it = devices_.find(id);
  return it == devices_.end() ? nullptr : &it->second;
}

DeviceRegistration* Registry::find(DeviceId id) {
  auto it = devices_.find(id);
  return it == devices_.end() ? nullptr : &it->second;
}

const DeviceRegistration& Registry::at(DeviceId id) const {
  const DeviceRegistration* reg = find(id);
  if (!reg) throw RegistrationError("unknown device id " + std::to_string(id.value));
  return *reg;
}

void Registry::append_offset(DeviceId id, ClockOffset offset) {
  DeviceRegistration* reg = find(id);
  if (!reg) throw RegistrationError("unknown device id " + std::to_string(id.value));
  if (offset.effective <= reg->offsets.back().effective) {
    throw ParameterError("offset effective times must increase");
  }
  reg->offsets.push_back(offset);
}

std::vector<DeviceId> Registry::beacons() const {
  std::vector<DeviceId> out;
  for (const auto& [id, reg] : devices_) {
    if (reg.type == DeviceType::kBeacon) out.push_back(id);
  }
  return out;
}

std::vector<DeviceId> Registry::dongles() const {
  std::vector<DeviceId> out;
  for (const auto& [id, reg] : devices_) {
    if (reg.type == DeviceType::kDongle) out.push_back(id);
  }
  return out;
}

}  // namespace silmarillion::backend
