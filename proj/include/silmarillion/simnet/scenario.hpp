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
#include <optional>
#include <string>
#include <vector>

#include "silmarillion/backend/upload.hpp"
#include "silmarillion/core/errors.hpp"
#include "silmarillion/core/tiling.hpp"

namespace silmarillion::simnet {

// Schema or cross-reference violation. what() reads "source:line: /json/pointer: message".
class ScenarioError : public Error {
 public:
  ScenarioError(std::string source, std::size_t line, std::string pointer, const std::string& message);
  const std::string& source() const { return source_; }
  std::size_t line() const { return line_; }
  const std::string& pointer() const { return pointer_; }

 private:
  std::string source_;
  std::size_t line_;
  std::string pointer_;
};

struct CrashEvent {
  Minutes at = 0;
  Minutes reboot = 0;
  bool operator==(const CrashEvent&) const = default;
};

struct BeaconSpec {
  std::string name;
  TileCoords tile;
  std::uint32_t desc = 0;
  std::vector<CrashEvent> crashes;
  bool operator==(const BeaconSpec&) const = default;
};

// The user is at `beacon` for every minute in [from, to).
struct Visit {
  std::size_t beacon = 0;
  Minutes from = 0;
  Minutes to = 0;
  std::int8_t rssi = -60;
  bool operator==(const Visit&) const = default;
};

struct UserSpec {
  std::string name;
  std::vector<Visit> visits;
  std::vector<CrashEvent> crashes;
  bool operator==(const UserSpec&) const = default;
};

struct Infection {
  std::size_t user = 0;
  std::uint32_t test_day = 0;
  backend::UploadMode mode = backend::UploadMode::kDelayed;
  std::vector<std::size_t> selection;  // beacons, selective mode only
  bool operator==(const Infection&) const = default;
};

enum class Retrieval : std::uint8_t { kBroadcast, kPir, kBoth };

struct ChannelSpec {
  double reception_probability = 1.0;
  double packet_loss = 0.0;
  std::size_t max_cycles = 16;
  bool operator==(const ChannelSpec&) const = default;
};

struct Scenario {
  std::string name;
  std::uint32_t days = 1;
  std::uint32_t epoch_minutes = 15;
  TilingParams tiling;
  std::vector<BeaconSpec> beacons;
  std::vector<UserSpec> users;
  std::vector<Infection> infections;
  ChannelSpec channel;
  double epsilon = 0.5;
  double delta = 0.001;
  std::uint32_t sensitivity = 2016;
  std::size_t block_cap = 1 << 20;
  bool annotated = false;
  bool overlap_filter = false;
  std::uint32_t notify_threshold = 1;
  Retrieval retrieval = Retrieval::kBroadcast;

  Minutes duration() const { return Minutes{days} * kMinutesPerDay; }
  LocationId beacon_loc(std::size_t i) const {
    return pack_location(beacons[i].tile.h, beacons[i].tile.m, beacons[i].tile.l, tiling);
  }
  bool operator==(const Scenario&) const = default;
};

const char* to_string(Retrieval r);

Scenario parse_scenario(const std::string& text, const std::string& source = "<scenario>");
Scenario load_scenario(const std::string& path);
std::string scenario_to_json(const Scenario& s);
void save_scenario(const Scenario& s, const std::string& path);

// Checks invariants on an in-memory scenario; throws ScenarioError with line 0.
void validate_scenario(const Scenario& s);

// 8 beacons in one building, 15 users, 16 days, three uploads.
Scenario make_pilot_scenario(std::uint64_t seed);

struct RandomScenarioLimits {
  std::size_t max_users = 20;
  std::size_t max_beacons = 10;
  std::uint32_t max_days = 7;
  std::size_t max_infections = 3;
};

// Loss-free, crash-free scenario with small tiling and noise so many can run
// quickly.
Scenario random_scenario(std::uint64_t seed, const RandomScenarioLimits& limits = {});

}  // namespace silmarillion::simnet
