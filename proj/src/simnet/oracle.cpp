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

#include "silmarillion/simnet/oracle.hpp"

#include <algorithm>
#include <map>
#include <utility>

namespace silmarillion::simnet {

namespace {

struct Presence {
  Minutes first = 0;
  Minutes last = 0;
};

using Key = std::pair<std::size_t, std::uint32_t>;  // beacon, epoch

std::map<Key, Presence> presence(const Scenario& s, const UserSpec& u) {
  const Minutes len = s.epoch_minutes;
  std::map<Key, Presence> out;
  for (const Visit& v : u.visits) {
    for (Minutes e = v.from / len; e * len < v.to; ++e) {
      const Minutes first = std::max(v.from, e * len);
      const Minutes last = std::min(v.to, (e + 1) * len) - 1;
      auto [it, fresh] = out.try_emplace({v.beacon, static_cast<std::uint32_t>(e)}, Presence{first, last});
      if (!fresh) {
        it->second.first = std::min(it->second.first, first);
        it->second.last = std::max(it->second.last, last);
      }
    }
  }
  return out;
}

}  // namespace

ExposureSet brute_force_exposures(const Scenario& s) {
  std::vector<std::map<Key, Presence>> traces;
  for (const UserSpec& u : s.users) traces.push_back(presence(s, u));

  // What each patient's upload contained.
  struct Upload {
    std::size_t user;
    std::uint32_t test_day;
    std::map<Key, Presence> records;
  };
  std::vector<Upload> uploads;
  for (const Infection& inf : s.infections) {
    const Minutes t0 = Minutes{inf.test_day} * kMinutesPerDay;
    Upload up{inf.user, inf.test_day, {}};
    for (const auto& [key, p] : traces[inf.user]) {
      if (p.first >= t0 || t0 - p.first > kRetentionMinutes) continue;
      if (inf.mode == backend::UploadMode::kSelective &&
          std::find(inf.selection.begin(), inf.selection.end(), key.first) == inf.selection.end()) {
        continue;
      }
      up.records.emplace(key, p);
    }
    uploads.push_back(std::move(up));
  }

  ExposureSet out;
  for (std::uint32_t d = 0; d < s.days; ++d) {
    const Minutes now = Minutes{d + 1} * kMinutesPerDay;
    // Retained uploaded encounters per beacon epoch: the uploaders and the
    // span of their visits.
    struct Risk {
      std::vector<std::size_t> uploaders;
      Presence hull{};
    };
    std::map<Key, Risk> risk;
    for (const Upload& up : uploads) {
      if (up.test_day > d) continue;
      for (const auto& [key, p] : up.records) {
        if (p.first < now - kRetentionMinutes) continue;
        auto [it, fresh] = risk.try_emplace(key, Risk{{}, p});
        it->second.uploaders.push_back(up.user);
        if (!fresh) {
          it->second.hull.first = std::min(it->second.hull.first, p.first);
          it->second.hull.last = std::max(it->second.hull.last, p.last);
        }
      }
    }
    for (std::size_t u = 0; u < traces.size(); ++u) {
      for (const auto& [key, p] : traces[u]) {
        if (p.first >= now || now - p.first > kRetentionMinutes) continue;
        auto it = risk.find(key);
        if (it == risk.end()) continue;
        const auto& ups = it->second.uploaders;
        if (std::all_of(ups.begin(), ups.end(), [&](std::size_t p_user) { return p_user == u; })) continue;
        if (s.overlap_filter && (p.first < it->second.hull.first || p.first > it->second.hull.last)) continue;
        out.insert({u, key.first, key.second});
      }
    }
  }
  return out;
}

}  // namespace silmarillion::simnet
