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
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "silmarillion/backend/registry.hpp"
#include "silmarillion/backend/upload.hpp"
#include "silmarillion/core/clock.hpp"
#include "silmarillion/core/wire.hpp"
#include "silmarillion/cuckoo/risk_payload.hpp"
#include "silmarillion/devices/network_beacon.hpp"

namespace silmarillion::devices {

inline constexpr std::size_t kDefaultLogCapacity = 2016;

struct DongleConfig {
  std::uint32_t epoch_len = kDefaultEpochMinutes;
  std::size_t log_capacity = kDefaultLogCapacity;
  Minutes retention = kRetentionMinutes;
  std::uint32_t notify_threshold = 1;
  cuckoo::CuckooParams cuckoo;
  TilingParams tiling;
};

struct LogRecord {
  EncounterRecord record;
  cuckoo::Probe probe;  // precomputed at sealing time
  bool matched = false;
  // Matched and, where the payload carried intervals, the recorded visit
  // started inside a patient's interval.
  bool overlap_matched = false;
  std::uint32_t rssi_samples = 0;
};

struct RiskScore {
  std::uint32_t score = 0;
  bool notify = false;
};

enum class DownloadStatus : std::uint8_t { kInProgress, kVerified, kRejected };

// Streams one signed payload off the periodic-broadcast channel holding at
// most one chunk in memory. Chunks are handed to the sink as they complete;
// the signature is checked once every chunk digest is known.
class PayloadReceiver {
 public:
  using Sink = std::function<void(const cuckoo::RiskChunk&)>;

  PayloadReceiver(std::uint32_t payload_id, const PublicKey& key) : payload_id_(payload_id), key_(key) {}

  DownloadStatus on_packet(const BroadcastPacket& packet, const Sink& sink);
  DownloadStatus status() const { return status_; }

  std::size_t packets_heard() const { return packets_heard_; }
  // Passes over the channel, counting the partial first and last ones.
  std::size_t cycles() const { return cycles_; }
  std::size_t chunks_done() const { return done_count_; }
  std::size_t peak_buffer_bytes() const { return peak_buffer_; }
  std::size_t chunk_size() const { return chunk_size_; }

 private:
  void absorb(std::size_t offset, ByteSpan data, const Sink& sink);
  void finish_chunk(const Sink& sink);

  std::uint32_t payload_id_;
  PublicKey key_;
  DownloadStatus status_ = DownloadStatus::kInProgress;
  std::size_t packets_heard_ = 0;
  std::size_t cycles_ = 0;
  std::optional<std::uint16_t> last_index_;

  Signature signature_{};
  std::size_t signature_have_ = 0;
  std::size_t chunk_size_ = 0;
  std::uint16_t total_chunks_ = 0;
  std::vector<std::optional<Digest>> digests_;
  std::size_t done_count_ = 0;

  std::optional<std::uint16_t> buffer_chunk_;
  Bytes buffer_;
  std::size_t peak_buffer_ = 0;
};

// Everything the dongle hands over for an upload. In early mode `release`
// holds the escrow key; the health authority's certificate is added to it
// once the user tests positive.
struct PreparedUpload {
  backend::UploadEnvelope envelope;
  std::optional<backend::KeyRelease> release;
};

class Dongle {
 public:
  Dongle(const backend::DeviceRegistration& reg, Minutes now, DongleConfig config = {});

  DeviceId id() const { return id_; }
  const DongleConfig& config() const { return config_; }
  const DeviceClock& clock() const { return clock_; }
  bool up() const { return up_; }

  // Clock handler: advances the timer, seals entries from past epochs into
  // the log and evicts expired records.
  void tick(Minutes now);
  // Encounter handler.
  void on_advertisement(const BeaconBroadcast& packet, std::int8_t rssi, Minutes now);
  // As above, from raw bytes; malformed packets are dropped and counted.
  void on_advertisement_bytes(ByteSpan packet, std::int8_t rssi, Minutes now);
  std::size_t dropped_packets() const { return dropped_; }

  void crash(Minutes now);
  void reboot(Minutes now);

  const std::deque<LogRecord>& log() const { return log_; }
  std::size_t active_count() const { return active_.size(); }
  // Distinct L-tiles over the log, ascending.
  std::vector<LocationId> visited_tiles() const;

  // Download handler, broadcast path.
  void begin_download(std::uint32_t payload_id, const PublicKey& key);
  DownloadStatus on_broadcast_packet(const BroadcastPacket& packet);
  const PayloadReceiver* download() const { return receiver_ ? &*receiver_ : nullptr; }

  // Probes every log record against one chunk. Results stay tentative until
  // commit_matches(); discard_matches() drops them.
  void on_risk_chunk(const cuckoo::RiskChunk& chunk);
  void commit_matches();
  void discard_matches();
  // Whole-payload path used after PIR retrieval. Returns false and changes
  // nothing if the signature does not verify.
  bool apply_payload(const cuckoo::RiskPayload& payload, const PublicKey& key);

  RiskScore risk_score(bool overlap_filter = false) const;

  std::optional<std::uint16_t> next_unused_otp() const;
  const backend::Otp& otp(std::uint16_t index) const { return otps_.at(index); }
  // Marks the OTP as spent; throws AuthenticationError if it already was.
  void consume_otp(std::uint16_t index);

  // `selection` is required in selective mode and names the ephemeral ids
  // to include.
  PreparedUpload prepare_upload(backend::UploadMode mode, std::uint16_t otp_index, Bytes certificate,
                                std::optional<std::span<const EphemeralId>> selection, Rng& rng);

 private:
  struct Active {
    BeaconBroadcast first;
    std::uint32_t start_b = 0;
    std::uint32_t last_b = 0;
    std::uint32_t start_d = 0;
    std::uint32_t last_d = 0;
    std::uint32_t epoch_d = 0;
    double rssi_sum = 0;
    std::uint32_t rssi_n = 0;
  };

  void advance(Minutes now);
  void seal(const Active& a);
  void evict();
  LogRecord* find(const EphemeralId& eph);

  DeviceId id_;
  SecretKey key_;
  std::vector<backend::Otp> otps_;
  std::set<std::uint16_t> used_otps_;
  DongleConfig config_;
  DeviceClock clock_;
  Minutes last_tick_;
  bool up_ = true;
  std::uint32_t persisted_ = 0;
  std::size_t dropped_ = 0;

  std::map<EphemeralId, Active> active_;
  std::deque<LogRecord> log_;
  std::uint32_t min_start_d_ = 0;
  std::map<EphemeralId, bool> tentative_;  // eph -> overlap flag
  std::optional<PayloadReceiver> receiver_;
};

}  // namespace silmarillion::devices
