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

#include <span>
#include <vector>

#include "silmarillion/backend/registry.hpp"
#include "silmarillion/backend/verification.hpp"

namespace silmarillion::backend {

struct RepairEvent {
  DeviceId device;
  ClockOffset offset;
  ReportKind trigger = ReportKind::kStartMismatch;
  std::size_t supporting_reports = 0;

  bool operator==(const RepairEvent&) const = default;
};

struct RepairResult {
  std::vector<RepairEvent> events;
  // Entries whose reports re-verified after a repair.
  std::vector<RiskDbEntry> recovered;
  std::vector<InconsistencyReport> unresolved;
};

// Repairs clock offsets from inconsistency reports and re-verifies them.
//
// An interval mismatch where the dongle observed an id for more than an epoch
// longer than the beacon did means the beacon rebooted mid-encounter; the
// beacon gets the segment {C' = end of the dongle's observation in real
// time, delta' = C' - beacon's local end time}.
//
// Start mismatches are clustered by suspect device and implied offset.  A
// cluster is applied when the suspect has an accepted encounter before the
// cluster's first real time (the evidence straddles the crash) and either two
// distinct counterparties agree on the offset or one counterparty has an
// accepted encounter with a third device at or after that time.
//
// Reports that still fail are returned as unresolved.
RepairResult repair_clock_offsets(std::vector<InconsistencyReport> reports, Registry& registry,
                                  std::span<const RiskDbEntry> accepted_history,
                                  std::uint32_t epoch_len);

}  // namespace silmarillion::backend
