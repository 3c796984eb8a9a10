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

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "silmarillion/simnet/metrics.hpp"
#include "silmarillion/simnet/scenario.hpp"

namespace silmarillion::simnet {

struct UserBandwidth {
  std::string name;
  std::size_t visited_tiles = 0;
  std::size_t query_blocks = 0;
  std::size_t query_upload_bytes = 0;
  std::size_t query_download_bytes = 0;
  std::size_t broadcast_download_bytes = 0;
};

struct BandwidthReport {
  std::vector<std::size_t> broadcast_bytes_per_day;
  std::size_t broadcast_bytes = 0;
  // Real ids across all published payloads, i.e. the infection load.
  std::size_t real_ids = 0;
  std::vector<UserBandwidth> users;
};

BandwidthReport bandwidth_report(const Metrics& m, const Scenario& s);

// "series,key,value" rows: one per day for broadcast bytes, then per user.
std::string bandwidth_csv(const BandwidthReport& r);

}  // namespace silmarillion::simnet
