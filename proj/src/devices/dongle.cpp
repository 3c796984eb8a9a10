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

#include "silmarillion/devices/dongle.hpp"

#include <algorithm>
#include <cmath>

#include "silmarillion/core/crypto.hpp"
#include "silmarillion/core/errors.hpp"

namespace silmarillion::devices {

namespace {

constexpr std::size_t kSigBytes = kSignatureSize;

}  // namespace

DownloadStatus PayloadReceiver::on_packet(const BroadcastPacket& packet, const Sink& sink) {
  if (status_ != DownloadStatus::kInProgress || packet.payload_id != payload_id_) return status_;
  ++packets_heard_;
  if (!last_index_ || packet.index <= *last_index_) ++cycles_;
  last_index_ = packet.index;
  try {
    absorb(std::size_t{packet.index} * kPacketDataSize, packet.data, sink);
  } catch (const FormatError&) {
    status_ = DownloadStatus::kRejected;
    return status_;
  }
  if (signature_have_ == kSigBytes && total_chunks_ > 0 && done_count_ == total_chunks_) {
    std::vector<Digest> ds;
    ds.reserve(digests_.size());
    for (const auto& d : digests_) ds.push_back(*d);
    const bool ok = verify_signature(key_, cuckoo::payload_signing_message(payload_id_, total_chunks_, ds),
                                     signature_);
    status_ = ok ? DownloadStatus::kVerified : DownloadStatus::kRejected;
  }
  return status_;
}

void PayloadReceiver::absorb(std::size_t offset, ByteSpan data, const Sink& sink) {
  std::size_t pos = offset;
  std::size_t idx = 0;
  if (pos < kSigBytes) {
    const std::size_t take = std::min(kSigBytes - pos, data.size());
    if (pos == 0 && take == kSigBytes) {
      std::copy_n(data.begin(), kSigBytes, signature_.begin());
      signature_have_ = kSigBytes;
    }
    idx += take;
    pos += take;
  }
  while (idx < data.size()) {
    if (chunk_size_ == 0) {
      // Chunk geometry comes from the first chunk's header.
      if (pos != kSigBytes || data.size() - idx < cuckoo::kChunkHeaderSize) return;
      ByteReader r(data.subspan(idx, cuckoo::kChunkHeaderSize));
      const std::uint32_t pid = r.u32();
      const std::uint16_t cid = r.u16();
      const std::uint16_t total = r.u16();
      const std::uint16_t body = r.u16();
      if (pid != payload_id_ || cid != 0 || total == 0) throw FormatError("unexpected first chunk header");
      chunk_size_ = cuckoo::kChunkHeaderSize + body;
      total_chunks_ = total;
      digests_.assign(total, std::nullopt);
    }
    const std::size_t rel = pos - kSigBytes;
    const std::size_t k = rel / chunk_size_;
    const std::size_t within = rel % chunk_size_;
    if (k >= total_chunks_) return;
    const std::size_t n = std::min(chunk_size_ - within, data.size() - idx);
    if (!digests_[k]) {
      if (within == 0) {
        buffer_chunk_ = static_cast<std::uint16_t>(k);
        buffer_.clear();
      }
      if (buffer_chunk_ == k && buffer_.size() == within) {
        buffer_.insert(buffer_.end(), data.begin() + idx, data.begin() + idx + n);
        peak_buffer_ = std::max(peak_buffer_, buffer_.size());
        if (buffer_.size() == chunk_size_) finish_chunk(sink);
      } else if (buffer_chunk_ == k) {
        buffer_chunk_.reset();  // a packet was lost mid-chunk
      }
    }
    idx += n;
    pos += n;
  }
}

void PayloadReceiver::finish_chunk(const Sink& sink) {
  const std::uint16_t k = *buffer_chunk_;
  std::size_t used = 0;
  cuckoo::RiskChunk chunk = cuckoo::parse_chunk(buffer_, &used);
  if (used != buffer_.size() || chunk.payload_id != payload_id_ || chunk.chunk_id != k ||
      chunk.total_chunks != total_chunks_) {
    throw FormatError("chunk header does not match its position");
  }
  digests_[k] = sha256(buffer_);
  ++done_count_;
  buffer_.clear();
  buffer_chunk_.reset();
  sink(chunk);
}

Dongle::Dongle(const backend::DeviceRegistration& reg, Minutes now, DongleConfig config)
    : id_(reg.id), key_(reg.key), otps_(reg.otps), config_(std::move(config)), last_tick_(now) {
  if (reg.type != backend::DeviceType::kDongle) throw ParameterError("registration is not a dongle");
  config_.cuckoo.validate();
  clock_.initial = reg.initial_clock;
  clock_.timer = static_cast<std::uint32_t>(Minutes{reg.initial_clock} + (now - reg.offsets.front().effective));
  clock_.epoch_len = config_.epoch_len;
}

void Dongle::advance(Minutes now) {
  if (now < last_tick_) throw ParameterError("dongle time moved backwards");
  if (up_) clock_.timer += static_cast<std::uint32_t>(now - last_tick_);
  last_tick_ = now;
}

void Dongle::tick(Minutes now) {
  advance(now);
  if (!up_) return;
  const std::uint32_t cur = epoch_of(clock_);
  std::vector<Active> due;
  for (auto it = active_.begin(); it != active_.end();) {
    if (it->second.epoch_d < cur) {
      due.push_back(it->second);
      it = active_.erase(it);
    } else {
      ++it;
    }
  }
  // Log order is first-seen order, so the circular log evicts the oldest.
  std::stable_sort(due.begin(), due.end(), [](const Active& a, const Active& b) { return a.start_d < b.start_d; });
  for (const Active& a : due) seal(a);
  evict();
}

void Dongle::on_advertisement(const BeaconBroadcast& packet, std::int8_t rssi, Minutes now) {
  tick(now);
  if (!up_) return;
  auto [it, fresh] = active_.try_emplace(packet.eph);
  Active& a = it->second;
  if (fresh) {
    a.first = packet;
    a.start_b = a.last_b = packet.clock;
    a.start_d = a.last_d = clock_.timer;
    a.epoch_d = epoch_of(clock_);
  } else {
    if (packet.clock >= a.start_b) a.last_b = std::max(a.last_b, packet.clock);
    a.last_d = clock_.timer;
  }
  a.rssi_sum += rssi;
  ++a.rssi_n;
}

void Dongle::on_advertisement_bytes(ByteSpan packet, std::int8_t rssi, Minutes now) {
  BeaconBroadcast b;
  try {
    b = parse_broadcast(packet);
  } catch (const FormatError&) {
    ++dropped_;
    return;
  }
  on_advertisement(b, rssi, now);
}

LogRecord* Dongle::find(const EphemeralId& eph) {
  for (LogRecord& r : log_) {
    if (r.record.eph == eph) return &r;
  }
  return nullptr;
}

void Dongle::seal(const Active& a) {
  if (LogRecord* ex = find(a.first.eph)) {
    EncounterRecord& r = ex->record;
    // Stamps from before the stored start mean one of the clocks went back;
    // the stored record already covers them.
    if (a.start_b < r.t_start_b || a.start_d < r.t_start_d) return;
    const Minutes end_b = std::max<Minutes>(Minutes{r.t_start_b} + r.t_int_b, a.last_b);
    const Minutes end_d = std::max<Minutes>(Minutes{r.t_start_d} + r.t_int_d, a.last_d);
    r.t_int_b = saturate_interval(end_b - r.t_start_b);
    r.t_int_d = saturate_interval(end_d - r.t_start_d);
    const double sum = double(r.rssi) * ex->rssi_samples + a.rssi_sum;
    ex->rssi_samples += a.rssi_n;
    r.rssi = static_cast<std::int8_t>(std::lround(sum / ex->rssi_samples));
    return;
  }
  LogRecord rec;
  EncounterRecord& r = rec.record;
  r.eph = a.first.eph;
  r.beacon = a.first.beacon;
  r.loc = a.first.loc;
  r.desc = a.first.desc;
  r.t_start_b = a.start_b;
  r.t_int_b = saturate_interval(Minutes{a.last_b} - a.start_b);
  r.t_start_d = a.start_d;
  r.t_int_d = saturate_interval(Minutes{a.last_d} - a.start_d);
  r.rssi = static_cast<std::int8_t>(std::lround(a.rssi_sum / a.rssi_n));
  rec.rssi_samples = a.rssi_n;
  rec.probe = cuckoo::fingerprint_and_indices(r.eph, config_.cuckoo);
  bool recompute = false;
  if (log_.size() >= config_.log_capacity) {
    log_.pop_front();
    recompute = true;
  }
  log_.push_back(rec);
  if (recompute || log_.size() == 1) {
    min_start_d_ = std::min_element(log_.begin(), log_.end(), [](const auto& x, const auto& y) {
                     return x.record.t_start_d < y.record.t_start_d;
                   })->record.t_start_d;
  } else {
    min_start_d_ = std::min(min_start_d_, r.t_start_d);
  }
}

void Dongle::evict() {
  if (log_.empty() || Minutes{clock_.timer} - min_start_d_ <= config_.retention) return;
  const Minutes timer = clock_.timer;
  std::erase_if(log_, [&](const LogRecord& r) { return timer - r.record.t_start_d > config_.retention; });
  if (log_.empty()) return;
  min_start_d_ = std::min_element(log_.begin(), log_.end(), [](const auto& x, const auto& y) {
                   return x.record.t_start_d < y.record.t_start_d;
                 })->record.t_start_d;
}

void Dongle::crash(Minutes now) {
  advance(now);
  if (!up_) return;
  persisted_ = persisted_timer(clock_);
  active_.clear();
  if (receiver_) {
    receiver_.reset();
    tentative_.clear();
  }
  up_ = false;
}

void Dongle::reboot(Minutes now) {
  advance(now);
  if (up_) return;
  up_ = true;
  clock_.timer = persisted_ + 1;
}

std::vector<LocationId> Dongle::visited_tiles() const {
  std::set<LocationId> tiles;
  for (const LogRecord& r : log_) tiles.insert(r.record.loc);
  return {tiles.begin(), tiles.end()};
}

void Dongle::begin_download(std::uint32_t payload_id, const PublicKey& key) {
  receiver_.emplace(payload_id, key);
  tentative_.clear();
}

DownloadStatus Dongle::on_broadcast_packet(const BroadcastPacket& packet) {
  if (!receiver_) throw ParameterError("no download in progress");
  if (receiver_->status() != DownloadStatus::kInProgress) return receiver_->status();
  const DownloadStatus s = receiver_->on_packet(packet, [this](const cuckoo::RiskChunk& c) { on_risk_chunk(c); });
  if (s == DownloadStatus::kVerified) commit_matches();
  if (s == DownloadStatus::kRejected) discard_matches();
  return s;
}

void Dongle::on_risk_chunk(const cuckoo::RiskChunk& chunk) {
  const cuckoo::CuckooFilter& f = chunk.filter;
  const bool same_params = f.params() == config_.cuckoo;
  for (const LogRecord& rec : log_) {
    const cuckoo::Probe probe =
        same_params ? rec.probe : cuckoo::fingerprint_and_indices(rec.record.eph, f.params());
    if (!f.contains(probe)) continue;
    bool overlap = true;
    if (f.annotated()) {
      overlap = false;
      const std::uint32_t mine = rec.record.t_start_b;
      for (std::uint64_t a : f.matching_annotations(probe)) {
        const std::uint32_t start = cuckoo::annotation_start(a);
        if (mine >= start && Minutes{mine} <= Minutes{start} + cuckoo::annotation_interval(a)) overlap = true;
      }
    }
    auto [it, fresh] = tentative_.try_emplace(rec.record.eph, overlap);
    if (!fresh) it->second = it->second || overlap;
  }
}

void Dongle::commit_matches() {
  for (const auto& [eph, overlap] : tentative_) {
    if (LogRecord* r = find(eph)) {
      r->matched = true;
      r->overlap_matched = r->overlap_matched || overlap;
    }
  }
  tentative_.clear();
}

void Dongle::discard_matches() { tentative_.clear(); }

bool Dongle::apply_payload(const cuckoo::RiskPayload& payload, const PublicKey& key) {
  if (!cuckoo::verify_payload(payload, key)) return false;
  tentative_.clear();
  for (const cuckoo::RiskChunk& c : payload.chunks) on_risk_chunk(c);
  commit_matches();
  return true;
}

RiskScore Dongle::risk_score(bool overlap_filter) const {
  RiskScore s;
  for (const LogRecord& r : log_) s.score += overlap_filter ? r.overlap_matched : r.matched;
  s.notify = s.score >= config_.notify_threshold;
  return s;
}

std::optional<std::uint16_t> Dongle::next_unused_otp() const {
  for (std::size_t i = 0; i < otps_.size(); ++i) {
    if (!used_otps_.count(static_cast<std::uint16_t>(i))) return static_cast<std::uint16_t>(i);
  }
  return std::nullopt;
}

void Dongle::consume_otp(std::uint16_t index) {
  if (index >= otps_.size()) throw AuthenticationError("OTP index " + std::to_string(index) + " out of range");
  if (!used_otps_.insert(index).second) {
    throw AuthenticationError("OTP " + std::to_string(index) + " already used");
  }
}

PreparedUpload Dongle::prepare_upload(backend::UploadMode mode, std::uint16_t otp_index, Bytes certificate,
                                      std::optional<std::span<const EphemeralId>> selection, Rng& rng) {
  if (mode == backend::UploadMode::kSelective && !selection) {
    throw ParameterError("selective upload needs a selection");
  }
  consume_otp(otp_index);
  std::vector<EncounterRecord> records;
  std::set<EphemeralId> chosen;
  if (mode == backend::UploadMode::kSelective) chosen.insert(selection->begin(), selection->end());
  for (const LogRecord& r : log_) {
    if (mode != backend::UploadMode::kSelective || chosen.count(r.record.eph)) records.push_back(r.record);
  }

  PreparedUpload out;
  const backend::Otp& otp = otps_[otp_index];
  if (mode == backend::UploadMode::kEarly) {
    std::array<std::uint8_t, 32> secret;
    rng.fill(secret);
    const AeadKey key = backend::early_key(otp, secret);
    const Digest commit = backend::key_commitment(key);
    out.envelope = backend::seal_upload(mode, id_, key, records, Bytes(commit.begin(), commit.end()), rng);
    out.release = backend::KeyRelease{id_, otp_index, otp, key, {}};
  } else {
    out.envelope = backend::seal_upload(mode, id_, backend::upload_key(key_, otp), records,
                                        std::move(certificate), rng);
  }
  return out;
}

}  // namespace silmarillion::devices
