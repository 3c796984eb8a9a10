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

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "silmarillion/backend/verification.hpp"
#include "silmarillion/core/tiling.hpp"

namespace silmarillion::backend {

inline constexpr double kDefaultSpeedCapKmPerMin = 5.0;

struct TravelAnomaly {
  DeviceId dongle;
  std::uint32_t upload_id = 0;
  RiskDbEntry from;
  RiskDbEntry to;
  double distance_km = 0;
  Minutes elapsed = 0;
};

// Flags consecutive entries (ordered by real time) whose tile distance over
// elapsed time exceeds `speed_cap`.  Elapsed time is floored at one minute.
std::vector<TravelAnomaly> detect_implausible_travel(std::span<const RiskDbEntry> entries,
                                                     double speed_cap = kDefaultSpeedCapKmPerMin,
                                                     const TilingParams& tiling = {});

// Per-beacon count of anomalies a beacon took part in, for operator review.
class SuspicionCounters {
 public:
  void record(const TravelAnomaly& anomaly);
  std::uint32_t count(DeviceId beacon) const;
  // Beacon with the highest count, lowest id on ties.
  std::optional<DeviceId> top() const;
  const std::map<DeviceId, std::uint32_t>& counts() const { return counts_; }

 private:
  std::map<DeviceId, std::uint32_t> counts_;
};

}  // namespace silmarillion::backend
