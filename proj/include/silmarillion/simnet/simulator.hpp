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
#include <vector>

#include "silmarillion/core/bytes.hpp"
#include "silmarillion/core/errors.hpp"
#include "silmarillion/simnet/metrics.hpp"
#include "silmarillion/simnet/scenario.hpp"

namespace silmarillion::simnet {

// Backend or device failure during a run, prefixed with the simulated day.
class SimulationError : public Error {
 public:
  SimulationError(std::uint32_t day, const std::string& message)
      : Error("day " + std::to_string(day) + ": " + message), day_(day) {}
  std::uint32_t day() const { return day_; }

 private:
  std::uint32_t day_;
};

enum class Party : std::uint8_t { kBeacon, kDongle, kNetworkBeacon, kBackend, kPirServer };
enum class EventKind : std::uint8_t {
  kAdvertisement,
  kBroadcastCycle,
  kUpload,
  kKeyRelease,
  kPirRequest,
  kPirResponse,
};

const char* to_string(Party p);
const char* to_string(EventKind k);

// One transmission. `sender` indexes the scenario's beacons or users; for a
// network beacon it is the tile's packed id.
struct Event {
  Minutes time = 0;
  EventKind kind = EventKind::kAdvertisement;
  Party party = Party::kBeacon;
  std::size_t sender = 0;
  std::size_t bytes = 0;
};

struct RunOptions {
  bool record_events = false;
  // Keep every byte string network beacons relay during PIR sessions, and
  // the plaintext blocks the dongles recovered from them.
  bool record_relay = false;
};

struct RunResult {
  Metrics metrics;
  std::vector<Event> events;
  std::vector<Bytes> relay_views;
  std::vector<Bytes> recovered_blocks;
};

RunResult run_scenario(const Scenario& s, std::uint64_t seed, const RunOptions& options = {});

inline Metrics run(const Scenario& s, std::uint64_t seed) { return run_scenario(s, seed).metrics; }

}  // namespace silmarillion::simnet
