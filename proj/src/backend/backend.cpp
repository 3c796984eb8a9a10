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

#include "silmarillion/backend/backend.hpp"

#include <algorithm>

#include "silmarillion/core/errors.hpp"

namespace silmarillion::backend {

namespace {

SigningKey key_from(Rng rng) {
  std::array<std::uint8_t, 32> seed;
  rng.fill(seed);
  return SigningKey::from_seed(seed);
}

Bytes bytes_from(Rng rng, std::size_t n) {
  Bytes b(n);
  rng.fill(b);
  return b;
}

IngestResult rejected(std::uint32_t upload_id, std::string reason) {
  IngestResult r;
  r.status = IngestStatus::kRejected;
  r.upload_id = upload_id;
  r.reason = std::move(reason);
  return r;
}

}  // namespace

Backend::Backend(BackendConfig config, std::uint64_t seed)
    : config_(std::move(config)),
      rng_(seed),
      signing_key_(key_from(rng_.derive("signing-key"))),
      authority_(bytes_from(rng_.derive("health-authority"), 32)) {
  config_.pipeline.tiling.validate();
  for (std::uint32_t i = 0; i < kPirServerCount; ++i) servers_.emplace_back(i, config_.pir_dedup);
}

std::size_t Backend::unresolved_start_mismatches() const {
  return static_cast<std::size_t>(std::count_if(pending_.begin(), pending_.end(), [](const auto& r) {
    return r.kind == ReportKind::kStartMismatch;
  }));
}

IngestResult Backend::ingest_upload(const UploadEnvelope& env, Minutes now) {
  (void)now;
  const std::uint32_t upload_id = next_upload_id_++;
  ++counters_.uploads;
  const DeviceRegistration* reg = registry_.find(env.dongle);
  if (!reg || reg->type != DeviceType::kDongle) {
    ++counters_.uploads_rejected;
    return rejected(upload_id, "unknown dongle");
  }

  if (env.mode == UploadMode::kEarly) {
    if (env.certificate.size() != sizeof(Digest)) {
      ++counters_.uploads_rejected;
      return rejected(upload_id, "early upload without key commitment");
    }
    escrow_.push_back({env, upload_id});
    ++counters_.escrowed;
    IngestResult r;
    r.status = IngestStatus::kEscrowed;
    r.upload_id = upload_id;
    return r;
  }

  if (!authority_.check(env.certificate, env.dongle)) {
    ++counters_.uploads_rejected;
    return rejected(upload_id, "missing or invalid certificate");
  }
  auto& used = used_otps_[env.dongle];
  for (std::size_t i = 0; i < reg->otps.size(); ++i) {
    if (used.count(static_cast<std::uint16_t>(i))) continue;
    auto records = open_upload(env, upload_key(reg->key, reg->otps[i]));
    if (!records) continue;
    used.insert(static_cast<std::uint16_t>(i));
    return process(*records, env.dongle, upload_id);
  }
  ++counters_.uploads_rejected;
  return rejected(upload_id, "upload failed authentication");
}

IngestResult Backend::release_escrow(const KeyRelease& release, Minutes now) {
  (void)now;
  const DeviceRegistration* reg = registry_.find(release.dongle);
  if (!reg || reg->type != DeviceType::kDongle || release.otp_index >= reg->otps.size() ||
      reg->otps[release.otp_index] != release.otp ||
      used_otps_[release.dongle].count(release.otp_index)) {
    return rejected(0, "key release with invalid or spent OTP");
  }
  if (!authority_.check(release.certificate, release.dongle)) {
    return rejected(0, "key release without valid certificate");
  }
  const Digest commitment = key_commitment(release.key);
  for (auto it = escrow_.begin(); it != escrow_.end(); ++it) {
    if (it->envelope.dongle != release.dongle ||
        !std::equal(commitment.begin(), commitment.end(), it->envelope.certificate.begin(),
                    it->envelope.certificate.end())) {
      continue;
    }
    auto records = open_upload(it->envelope, release.key);
    const std::uint32_t upload_id = it->upload_id;
    escrow_.erase(it);
    --counters_.escrowed;
    if (!records) {
      ++counters_.uploads_rejected;
      return rejected(upload_id, "escrowed upload failed authentication");
    }
    used_otps_[release.dongle].insert(release.otp_index);
    return process(*records, release.dongle, upload_id);
  }
  return rejected(0, "no escrowed upload matches the released key");
}

IngestResult Backend::process(const std::vector<EncounterRecord>& records, DeviceId dongle,
                              std::uint32_t upload_id) {
  IngestResult r;
  r.status = IngestStatus::kAccepted;
  r.upload_id = upload_id;
  r.uploaded = records.size();
  counters_.encounters_uploaded += records.size();

  std::vector<RiskDbEntry> mine;
  for (const EncounterRecord& rec : records) {
    VerifyResult v = verify_encounter(rec, dongle, registry_, upload_id, config_.epoch_len);
    switch (v.status) {
      case VerifyStatus::kAccepted:
        ++r.accepted;
        riskdb_.push_back(*v.entry);
        history_.push_back(*v.entry);
        mine.push_back(*v.entry);
        if (v.report) pending_.push_back(*v.report);
        break;
      case VerifyStatus::kInconsistent:
        ++r.inconsistent;
        pending_.push_back(*v.report);
        break;
      case VerifyStatus::kRejected:
        ++r.rejected;
        break;
    }
  }
  counters_.encounters_accepted += r.accepted;
  counters_.encounters_rejected += r.rejected;

  RepairResult repair = repair_clock_offsets(std::move(pending_), registry_, history_, config_.epoch_len);
  pending_ = std::move(repair.unresolved);
  for (const RepairEvent& e : repair.events) repairs_.push_back(e);
  counters_.repair_events += repair.events.size();
  for (const RiskDbEntry& e : repair.recovered) {
    riskdb_.push_back(e);
    history_.push_back(e);
    if (e.upload_id == upload_id) mine.push_back(e);
  }
  r.recovered = repair.recovered.size();
  counters_.encounters_accepted += repair.recovered.size();

  std::stable_sort(mine.begin(), mine.end(),
                   [](const RiskDbEntry& a, const RiskDbEntry& b) { return a.real_time < b.real_time; });
  for (TravelAnomaly& a : detect_implausible_travel(mine, config_.speed_cap, config_.pipeline.tiling)) {
    suspicion_.record(a);
    anomalies_.push_back(std::move(a));
    ++counters_.anomalies;
  }
  return r;
}

std::vector<LocationId> Backend::beacon_tiles() const {
  std::vector<LocationId> tiles;
  for (DeviceId id : registry_.beacons()) tiles.push_back(registry_.at(id).loc);
  std::sort(tiles.begin(), tiles.end());
  tiles.erase(std::unique(tiles.begin(), tiles.end()), tiles.end());
  return tiles;
}

DailyRisk Backend::run_daily_pipeline(std::uint32_t day, Minutes now) {
  riskdb_ = prune_riskdb(riskdb_, now);
  history_ = prune_riskdb(history_, now);
  const std::vector<LocationId> tiles = beacon_tiles();
  DailyRisk risk = assemble_daily_risk(riskdb_, day, tiles, config_.pipeline, signing_key_,
                                       rng_.derive("pipeline"));
  for (PirServer& s : servers_) s.publish(risk.pir);
  return risk;
}

}  // namespace silmarillion::backend
