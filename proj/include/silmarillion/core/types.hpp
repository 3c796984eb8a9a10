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
#include <compare>
#include <cstdint>
#include <cstring>
#include <functional>
#include <string>

#include "silmarillion/core/bytes.hpp"

namespace silmarillion {

// Timer readings and real time, in minutes since the deployment epoch.
using Minutes = std::int64_t;

inline constexpr Minutes kMinutesPerDay = 1440;
inline constexpr Minutes kRetentionMinutes = 14 * kMinutesPerDay;

struct DeviceId {
  std::uint32_t value = 0;
  auto operator<=>(const DeviceId&) const = default;
};

// Opaque environmental code of a beacon, carried verbatim.
struct Descriptor {
  std::uint32_t value = 0;
  auto operator<=>(const Descriptor&) const = default;
};

// Symmetric secret shared by one device and the backend.  Intentionally has
// no serializer.
struct SecretKey {
  std::array<std::uint8_t, 32> bytes{};
  auto operator<=>(const SecretKey&) const = default;
};

inline constexpr std::size_t kEphemeralIdSize = 15;

struct EphemeralId {
  std::array<std::uint8_t, kEphemeralIdSize> bytes{};
  auto operator<=>(const EphemeralId&) const = default;

  std::string hex() const { return to_hex(bytes); }
};

}  // namespace silmarillion

template <>
struct std::hash<silmarillion::EphemeralId> {
  std::size_t operator()(const silmarillion::EphemeralId& id) const noexcept {
    std::uint64_t a;
    std::uint64_t b = 0;
    std::memcpy(&a, id.bytes.data(), 8);
    std::memcpy(&b, id.bytes.data() + 8, 7);
    return static_cast<std::size_t>(a ^ (b * 0x9e3779b97f4a7c15ULL));
  }
};

template <>
struct std::hash<silmarillion::DeviceId> {
  std::size_t operator()(const silmarillion::DeviceId& id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};
