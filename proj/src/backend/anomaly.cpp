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

#include "silmarillion/backend/anomaly.hpp"

#include <algorithm>

namespace silmarillion::backend {

std::vector<TravelAnomaly> detect_implausible_travel(std::span<const RiskDbEntry> entries,
                                                     double speed_cap, const TilingParams& tiling) {
  std::vector<TravelAnomaly> out;
  for (std::size_t i = 1; i < entries.size(); ++i) {
    const RiskDbEntry& a = entries[i - 1];
    const RiskDbEntry& b = entries[i];
    const double km = tile_distance_km(a.loc, b.loc, tiling);
    const Minutes dt = std::max<Minutes>(1, b.real_time - a.real_time);
    if (km / static_cast<double>(dt) > speed_cap) {
      out.push_back({b.dongle, b.upload_id, a, b, km, dt});
    }
  }
  return out;
}

void SuspicionCounters::record(const TravelAnomaly& anomaly) {
  ++counts_[anomaly.from.beacon];
  if (anomaly.to.beacon != anomaly.from.beacon) ++counts_[anomaly.to.beacon];
}

std::uint32_t SuspicionCounters::count(DeviceId beacon) const {
  auto it = counts_.find(beacon);
  return it == counts_.end() ? 0 : it->second;
}

std::optional<DeviceId> SuspicionCounters::top() const {
  std::optional<DeviceId> best;
  std::uint32_t best_count = 0;
  for (const auto& [id, n] : counts_) {
    if (n > best_count) {
      best = id;
      best_count = n;
    }
  }
  return best;
}

}  // namespace silmarillion::backend
