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

#include "silmarillion/core/clock.hpp"

#include <string>

#include "silmarillion/core/errors.hpp"

namespace silmarillion {

std::uint32_t epoch_at(std::uint32_t initial, std::uint32_t timer, std::uint32_t epoch_len) {
  if (epoch_len == 0) throw InvalidClockError("epoch length must be positive");
  if (timer < initial) {
    throw InvalidClockError("timer " + std::to_string(timer) + " is behind initial clock " +
                            std::to_string(initial));
  }
  return (timer - initial) / epoch_len;
}

std::uint32_t epoch_of(const DeviceClock& clock) {
  return epoch_at(clock.initial, clock.timer, clock.epoch_len);
}

std::uint32_t persisted_timer(const DeviceClock& clock) {
  return clock.initial + epoch_of(clock) * clock.epoch_len;
}

}  // namespace silmarillion
