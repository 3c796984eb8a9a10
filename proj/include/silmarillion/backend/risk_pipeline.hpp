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
#include <span>
#include <vector>

#include "silmarillion/backend/verification.hpp"
#include "silmarillion/core/crypto.hpp"
#include "silmarillion/core/rng.hpp"
#include "silmarillion/core/tiling.hpp"
#include "silmarillion/pir/pir_db.hpp"
#include "silmarillion/privacy/dp_noise.hpp"

namespace silmarillion::backend {

struct PipelineParams {
  TilingParams tiling;
  privacy::DpParams dp = privacy::dp_params(0.5, 0.001);
  pir::PayloadOptions payload;
  std::size_t block_cap = 1 << 20;
  bool build_pir = true;
};

struct TileBroadcast {
  LocationId tile;
  pir::NoisedPayload noised;
  Bytes wire;  // serialized signed payload
};

struct DailyRisk {
  std::uint32_t day = 0;
  std::map<LocationId, TileBroadcast> broadcast;
  std::map<std::uint32_t, pir::PirDb> pir;  // by H-tile

  std::size_t broadcast_bytes() const;
};

// Drops entries whose real time is more than 14 days before `now`.
std::vector<RiskDbEntry> prune_riskdb(std::span<const RiskDbEntry> riskdb, Minutes now);

// One signed, noised chunk set per tile in `tiles` (plus any tile holding an
// entry) and, if enabled, one PIR database per H-tile with independently
// drawn noise.  Entries sharing an id are merged; in annotated mode the
// merged annotation is the hull of their beacon-side intervals.  Randomness
// is derived from `rng` per (day, tile), so the result depends only on the
// inputs and the seed.
DailyRisk assemble_daily_risk(std::span<const RiskDbEntry> riskdb, std::uint32_t day,
                              std::span<const LocationId> tiles, const PipelineParams& params,
                              const SigningKey& key, const Rng& rng);

}  // namespace silmarillion::backend
