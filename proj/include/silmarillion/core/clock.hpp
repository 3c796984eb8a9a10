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

#include "silmarillion/core/types.hpp"

namespace silmarillion {

inline constexpr std::uint32_t kDefaultEpochMinutes = 15;

// Minute-resolution device timer.  `timer` starts at `initial` and
// increments once per minute; a crash rewinds it to the last persisted value.
struct DeviceClock {
  std::uint32_t initial = 0;
  std::uint32_t timer = 0;
  std::uint32_t epoch_len = kDefaultEpochMinutes;

  bool operator==(const DeviceClock&) const = default;
};

// floor((timer - initial) / epoch_len).  Throws InvalidClockError when the
// timer is behind the initial clock or the epoch length is zero.
std::uint32_t epoch_of(const DeviceClock& clock);

// Same as epoch_of for a raw timer reading.
std::uint32_t epoch_at(std::uint32_t initial, std::uint32_t timer, std::uint32_t epoch_len);

// Timer value a device persists at its last epoch boundary; what it resumes
// from (+1) after a reboot.
std::uint32_t persisted_timer(const DeviceClock& clock);

}  // namespace silmarillion
