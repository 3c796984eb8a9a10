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
#include <string>

#include "silmarillion/backend/registry.hpp"
#include "silmarillion/core/wire.hpp"

namespace silmarillion::backend {

struct RiskDbEntry {
  EphemeralId eph;
  LocationId loc;
  Descriptor desc;
  std::int8_t rssi = 0;
  Minutes real_time = 0;  // T, verified real time of the encounter start
  std::uint32_t upload_id = 0;
  DeviceId beacon;
  DeviceId dongle;
  std::uint32_t t_start_b = 0;
  std::uint8_t t_int_b = 0;

  bool operator==(const RiskDbEntry&) const = default;
};

enum class ReportKind : std::uint8_t {
  // Start times disagree under every offset combination.
  kStartMismatch = 1,
  // Start times agree but the two observed durations differ by more than an
  // epoch: one side rebooted while the other kept observing.
  kIntervalMismatch = 2,
};

struct InconsistencyReport {
  ReportKind kind = ReportKind::kStartMismatch;
  std::uint32_t upload_id = 0;
  DeviceId dongle;
  EncounterRecord record;

  bool operator==(const InconsistencyReport&) const = default;
};

enum class VerifyStatus : std::uint8_t { kAccepted, kRejected, kInconsistent };

struct VerifyResult {
  VerifyStatus status = VerifyStatus::kRejected;
  std::optional<RiskDbEntry> entry;
  std::optional<InconsistencyReport> report;  // set for kInconsistent, and for
                                              // accepted interval mismatches
  std::string reason;
};

inline constexpr Minutes kTimeSlack = 1;

// Checks, in order: the ephemeral id recomputed from the beacon's key,
// location and local epoch of t_start_b; real-time agreement of the two start
// stamps within kTimeSlack under some pair of offset segments; agreement of
// the two observed durations.
VerifyResult verify_encounter(const EncounterRecord& record, DeviceId dongle, const Registry& registry,
                              std::uint32_t upload_id, std::uint32_t epoch_len);

}  // namespace silmarillion::backend
