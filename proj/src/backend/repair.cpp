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

#include "silmarillion/backend/repair.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <tuple>

namespace silmarillion::backend {

namespace {

struct Candidate {
  DeviceId suspect;
  DeviceId counterparty;
  Minutes delta;      // implied offset for the suspect
  Minutes real_time;  // the counterparty's real time of the encounter
  std::size_t report;
};

struct Cluster {
  DeviceId suspect;
  Minutes delta = 0;
  Minutes first_real = 0;
  std::set<DeviceId> counterparties;
  std::size_t size = 0;
};

bool maps_to(const DeviceRegistration& reg, Minutes local, Minutes real) {
  for (Minutes r : candidate_real_times(reg, local)) {
    if (std::llabs(r - real) <= kTimeSlack) return true;
  }
  return false;
}

// Real time of the dongle-side start under the segment pairing that made the
// record acceptable.
std::optional<Minutes> agreed_start(const EncounterRecord& rec, const DeviceRegistration& beacon,
                                    const DeviceRegistration& dongle) {
  for (Minutes td : candidate_real_times(dongle, rec.t_start_d)) {
    for (Minutes tb : candidate_real_times(beacon, rec.t_start_b)) {
      if (std::llabs(td - tb) <= kTimeSlack) return td;
    }
  }
  return std::nullopt;
}

bool try_append(Registry& registry, DeviceId id, ClockOffset offset) {
  const DeviceRegistration& reg = registry.at(id);
  if (offset.effective <= reg.offsets.back().effective) return false;
  registry.append_offset(id, offset);
  return true;
}

}  // namespace

RepairResult repair_clock_offsets(std::vector<InconsistencyReport> reports, Registry& registry,
                                  std::span<const RiskDbEntry> accepted_history,
                                  std::uint32_t epoch_len) {
  RepairResult out;
  std::vector<RiskDbEntry> history(accepted_history.begin(), accepted_history.end());
  const Minutes span_limit = Minutes{epoch_len} + kTimeSlack;

  bool progress = true;
  while (progress) {
    progress = false;

    // Interval mismatches.
    for (auto it = reports.begin(); it != reports.end();) {
      if (it->kind != ReportKind::kIntervalMismatch) {
        ++it;
        continue;
      }
      const EncounterRecord& rec = it->record;
      const DeviceRegistration& beacon = registry.at(rec.beacon);
      const DeviceRegistration& dongle = registry.at(it->dongle);
      const auto start = agreed_start(rec, beacon, dongle);
      bool resolved = false;
      if (start && rec.t_int_d > rec.t_int_b + span_limit && rec.t_int_d < 255) {
        const Minutes end_real = *start + rec.t_int_d;
        const Minutes end_local = Minutes{rec.t_start_b} + rec.t_int_b;
        if (maps_to(beacon, end_local, end_real)) {
          resolved = true;
        } else {
          ClockOffset off{end_real, end_real - end_local};
          if (try_append(registry, rec.beacon, off)) {
            out.events.push_back({rec.beacon, off, ReportKind::kIntervalMismatch, 1});
            progress = true;
            resolved = true;
          }
        }
      } else if (start && rec.t_int_b > rec.t_int_d + span_limit) {
        // The dongle rebooted; its own end stamp is lost, so the report is
        // settled once a later segment for the dongle exists.
        resolved = dongle.offsets.back().effective > *start;
      }
      it = resolved ? reports.erase(it) : it + 1;
    }

    // Re-verify start mismatches under the current offsets.
    for (auto it = reports.begin(); it != reports.end();) {
      if (it->kind != ReportKind::kStartMismatch) {
        ++it;
        continue;
      }
      VerifyResult v = verify_encounter(it->record, it->dongle, registry, it->upload_id, epoch_len);
      if (v.status == VerifyStatus::kAccepted) {
        out.recovered.push_back(*v.entry);
        history.push_back(*v.entry);
        it = reports.erase(it);
        progress = true;
      } else {
        ++it;
      }
    }
    if (progress) continue;

    // Cluster the remaining start mismatches.
    std::vector<Candidate> cands;
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const InconsistencyReport& r = reports[i];
      if (r.kind != ReportKind::kStartMismatch) continue;
      const DeviceRegistration* beacon = registry.find(r.record.beacon);
      const DeviceRegistration* dongle = registry.find(r.dongle);
      if (!beacon || !dongle) continue;
      for (Minutes real : candidate_real_times(*dongle, r.record.t_start_d)) {
        cands.push_back({beacon->id, dongle->id, real - Minutes{r.record.t_start_b}, real, i});
      }
      for (Minutes real : candidate_real_times(*beacon, r.record.t_start_b)) {
        cands.push_back({dongle->id, beacon->id, real - Minutes{r.record.t_start_d}, real, i});
      }
    }
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
      return std::tie(a.suspect, a.delta, a.real_time) < std::tie(b.suspect, b.delta, b.real_time);
    });

    std::vector<Cluster> clusters;
    for (std::size_t i = 0; i < cands.size();) {
      Cluster c;
      c.suspect = cands[i].suspect;
      c.delta = cands[i].delta;
      c.first_real = cands[i].real_time;
      std::set<std::size_t> members;
      std::vector<Minutes> deltas;
      std::size_t j = i;
      // Offsets within two minutes of the cluster's smallest one agree up to
      // timer quantization on both sides.
      for (; j < cands.size() && cands[j].suspect == c.suspect && cands[j].delta - c.delta <= 2 * kTimeSlack;
           ++j) {
        c.counterparties.insert(cands[j].counterparty);
        c.first_real = std::min(c.first_real, cands[j].real_time);
        members.insert(cands[j].report);
        deltas.push_back(cands[j].delta);
      }
      c.delta = deltas[deltas.size() / 2];
      c.size = members.size();
      clusters.push_back(c);
      i = j;
    }

    auto supported = [&](const Cluster& c) {
      bool straddles = std::any_of(history.begin(), history.end(), [&](const RiskDbEntry& e) {
        return (e.beacon == c.suspect || e.dongle == c.suspect) && e.real_time < c.first_real;
      });
      if (!straddles) return false;
      if (c.counterparties.size() >= 2) return true;
      for (DeviceId cp : c.counterparties) {
        const bool consistent = std::any_of(history.begin(), history.end(), [&](const RiskDbEntry& e) {
          const bool involves_cp = e.beacon == cp || e.dongle == cp;
          const bool involves_suspect = e.beacon == c.suspect || e.dongle == c.suspect;
          return involves_cp && !involves_suspect && e.real_time >= c.first_real;
        });
        if (consistent) return true;
      }
      return false;
    };

    const Cluster* best = nullptr;
    for (const Cluster& c : clusters) {
      if (!supported(c)) continue;
      if (c.first_real <= registry.at(c.suspect).offsets.back().effective) continue;
      if (!best || c.counterparties.size() > best->counterparties.size() ||
          (c.counterparties.size() == best->counterparties.size() &&
           std::tie(c.first_real, c.suspect) < std::tie(best->first_real, best->suspect))) {
        best = &c;
      }
    }
    if (best) {
      ClockOffset off{best->first_real, best->delta};
      registry.append_offset(best->suspect, off);
      out.events.push_back({best->suspect, off, ReportKind::kStartMismatch, best->size});
      progress = true;
    }
  }
  out.unresolved = std::move(reports);
  return out;
}

}  // namespace silmarillion::backend
