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

#include "silmarillion/backend/verification.hpp"

#include <cstdlib>

#include "silmarillion/core/clock.hpp"
#include "silmarillion/core/ephemeral_id.hpp"

namespace silmarillion::backend {

namespace {

VerifyResult rejected(std::string reason) {
  VerifyResult r;
  r.status = VerifyStatus::kRejected;
  r.reason = std::move(reason);
  return r;
}

}  // namespace

VerifyResult verify_encounter(const EncounterRecord& record, DeviceId dongle, const Registry& registry,
                              std::uint32_t upload_id, std::uint32_t epoch_len) {
  const DeviceRegistration* beacon = registry.find(record.beacon);
  if (!beacon || beacon->type != DeviceType::kBeacon) return rejected("unknown beacon");
  const DeviceRegistration* owner = registry.find(dongle);
  if (!owner || owner->type != DeviceType::kDongle) return rejected("unknown dongle");
  if (record.t_start_b < beacon->initial_clock) return rejected("beacon timer before its initial clock");

  const std::uint32_t epoch = epoch_at(beacon->initial_clock, record.t_start_b, epoch_len);
  if (derive_ephemeral_id(beacon->key, beacon->loc, epoch) != record.eph) {
    return rejected("ephemeral id mismatch");
  }

  const auto beacon_times = candidate_real_times(*beacon, record.t_start_b);
  const auto dongle_times = candidate_real_times(*owner, record.t_start_d);
  std::optional<Minutes> agreed;
  for (Minutes td : dongle_times) {
    for (Minutes tb : beacon_times) {
      if (std::llabs(td - tb) <= kTimeSlack) {
        agreed = td;
        break;
      }
    }
    if (agreed) break;
  }

  VerifyResult r;
  if (!agreed) {
    r.status = VerifyStatus::kInconsistent;
    r.report = InconsistencyReport{ReportKind::kStartMismatch, upload_id, dongle, record};
    r.reason = "start times disagree";
    return r;
  }

  r.status = VerifyStatus::kAccepted;
  r.entry = RiskDbEntry{record.eph,     beacon->loc, beacon->desc,     record.rssi, *agreed,
                        upload_id,      beacon->id,  dongle,           record.t_start_b,
                        record.t_int_b};
  const Minutes span_gap = std::llabs(Minutes{record.t_int_d} - Minutes{record.t_int_b});
  if (span_gap > Minutes{epoch_len} + kTimeSlack) {
    r.report = InconsistencyReport{ReportKind::kIntervalMismatch, upload_id, dongle, record};
    r.reason = "observed durations differ by " + std::to_string(span_gap) + " minutes";
  }
  return r;
}

}  // namespace silmarillion::backend
