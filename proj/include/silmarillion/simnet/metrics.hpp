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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "silmarillion/core/crypto.hpp"
#include "silmarillion/core/tiling.hpp"
#include "silmarillion/core/types.hpp"

namespace silmarillion::simnet {

// A user's logged encounter with one beacon epoch.
struct Exposure {
  std::size_t user = 0;
  std::size_t beacon = 0;
  std::uint32_t epoch = 0;
  auto operator<=>(const Exposure&) const = default;
};

using ExposureSet = std::set<Exposure>;

struct DayMetrics {
  std::uint32_t day = 0;
  std::size_t advertisements = 0;
  std::size_t receptions = 0;
  std::size_t broadcast_tiles = 0;
  std::size_t broadcast_bytes = 0;
  std::size_t real_ids = 0;
  std::size_t junk_ids = 0;
  std::size_t pir_blocks = 0;
  std::size_t download_packets = 0;
  std::size_t download_bytes = 0;
  std::size_t retransmission_cycles = 0;
  std::size_t downloads_failed = 0;
  std::size_t query_upload_bytes = 0;
  std::size_t query_download_bytes = 0;
  std::size_t query_blocks = 0;
  std::size_t uploads = 0;
  std::size_t uploads_rejected = 0;
  std::size_t encounters_uploaded = 0;
  std::size_t encounters_accepted = 0;
  std::size_t encounters_rejected = 0;
  std::size_t encounters_inconsistent = 0;
  std::size_t encounters_recovered = 0;
  std::size_t repair_events = 0;
  std::size_t anomalies = 0;
  std::size_t true_matches = 0;
  std::size_t false_matches = 0;
  std::size_t self_matches = 0;
  std::size_t notified_users = 0;
};

struct UserMetrics {
  std::string name;
  std::size_t log_records = 0;  // at the end of the run
  std::size_t visited_tiles = 0;
  std::size_t true_positives = 0;  // distinct exposures
  std::size_t false_positives = 0;  // distinct matched records
  std::size_t self_matches = 0;
  bool notified = false;
  std::int64_t first_notified_day = -1;
  std::size_t query_upload_bytes = 0;
  std::size_t query_download_bytes = 0;
  std::size_t query_blocks = 0;
  std::size_t download_bytes = 0;
};

// One row per published broadcast payload.
struct PayloadSize {
  std::uint32_t day = 0;
  LocationId tile;
  std::size_t real_ids = 0;
  std::size_t junk_ids = 0;
  std::size_t bytes = 0;
};

struct Metrics {
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<DayMetrics> days;
  std::vector<UserMetrics> users;
  std::vector<PayloadSize> payload_sizes;
  std::size_t unique_ephemeral_ids = 0;
  std::size_t captured_ids = 0;
  std::size_t unresolved_inconsistencies = 0;
  std::size_t dropped_packets = 0;
  ExposureSet true_positives;
  // Hash over every signed payload published during the run.
  Digest payload_digest{};

  std::size_t total(std::size_t DayMetrics::*field) const;
};

// CSV with header "day,metric,value": one row per (day, metric) in a fixed
// order, then per-user rows and a summary block whose day column reads
// "summary".
std::string metrics_csv(const Metrics& m);
// Header "day,tile,real_ids,junk_ids,bytes".
std::string payload_sizes_csv(const Metrics& m);
std::string summary_text(const Metrics& m);

}  // namespace silmarillion::simnet
