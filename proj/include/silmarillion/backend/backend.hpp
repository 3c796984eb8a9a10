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
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "silmarillion/backend/anomaly.hpp"
#include "silmarillion/backend/pir_server.hpp"
#include "silmarillion/backend/registry.hpp"
#include "silmarillion/backend/repair.hpp"
#include "silmarillion/backend/risk_pipeline.hpp"
#include "silmarillion/backend/upload.hpp"
#include "silmarillion/backend/verification.hpp"
#include "silmarillion/core/clock.hpp"

namespace silmarillion::backend {

struct BackendConfig {
  std::uint32_t epoch_len = kDefaultEpochMinutes;
  PipelineParams pipeline;
  double speed_cap = kDefaultSpeedCapKmPerMin;
  bool pir_dedup = true;
};

enum class IngestStatus : std::uint8_t { kAccepted, kEscrowed, kRejected };

struct IngestResult {
  IngestStatus status = IngestStatus::kRejected;
  std::uint32_t upload_id = 0;
  std::size_t uploaded = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t inconsistent = 0;
  // Entries from any upload that re-verified after repairs triggered here.
  std::size_t recovered = 0;
  std::string reason;
};

struct BackendCounters {
  std::size_t uploads = 0;
  std::size_t uploads_rejected = 0;
  std::size_t escrowed = 0;
  std::size_t encounters_uploaded = 0;
  std::size_t encounters_accepted = 0;
  std::size_t encounters_rejected = 0;  // id mismatch or unknown devices
  std::size_t repair_events = 0;
  std::size_t anomalies = 0;
};

class Backend {
 public:
  Backend(BackendConfig config, std::uint64_t seed);

  Registry& registry() { return registry_; }
  const Registry& registry() const { return registry_; }
  const PublicKey& public_key() const { return signing_key_.public_key(); }
  const HealthAuthority& authority() const { return authority_; }
  const BackendConfig& config() const { return config_; }

  IngestResult ingest_upload(const UploadEnvelope& env, Minutes now);
  IngestResult release_escrow(const KeyRelease& release, Minutes now);

  // Prunes RiskDB to the retention window ending at `now`, assembles the
  // day's payloads and publishes the PIR databases to both servers.
  DailyRisk run_daily_pipeline(std::uint32_t day, Minutes now);

  std::span<const RiskDbEntry> riskdb() const { return riskdb_; }
  const std::vector<InconsistencyReport>& pending_reports() const { return pending_; }
  std::size_t unresolved_start_mismatches() const;
  const std::vector<RepairEvent>& repair_events() const { return repairs_; }
  const std::vector<TravelAnomaly>& anomalies() const { return anomalies_; }
  const SuspicionCounters& suspicion() const { return suspicion_; }
  const BackendCounters& counters() const { return counters_; }
  PirServer& pir_server(std::uint32_t index) { return servers_.at(index); }

 private:
  IngestResult process(const std::vector<EncounterRecord>& records, DeviceId dongle,
                       std::uint32_t upload_id);
  std::vector<LocationId> beacon_tiles() const;

  struct Escrow {
    UploadEnvelope envelope;
    std::uint32_t upload_id;
  };

  BackendConfig config_;
  Rng rng_;
  SigningKey signing_key_;
  HealthAuthority authority_;
  Registry registry_;
  std::vector<RiskDbEntry> riskdb_;
  std::vector<RiskDbEntry> history_;
  std::vector<InconsistencyReport> pending_;
  std::vector<RepairEvent> repairs_;
  std::vector<TravelAnomaly> anomalies_;
  SuspicionCounters suspicion_;
  std::map<DeviceId, std::set<std::uint16_t>> used_otps_;
  std::vector<Escrow> escrow_;
  std::vector<PirServer> servers_;
  BackendCounters counters_;
  std::uint32_t next_upload_id_ = 1;
};

}  // namespace silmarillion::backend
