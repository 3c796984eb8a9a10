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

#include "silmarillion/simnet/simulator.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>

#include "silmarillion/backend/backend.hpp"
#include "silmarillion/core/crypto.hpp"
#include "silmarillion/core/rng.hpp"
#include "silmarillion/core/wire.hpp"
#include "silmarillion/devices/beacon.hpp"
#include "silmarillion/devices/dongle.hpp"
#include "silmarillion/devices/network_beacon.hpp"
#include "silmarillion/devices/pir_session.hpp"
#include "silmarillion/privacy/dp_noise.hpp"

namespace silmarillion::simnet {

const char* to_string(Party p) {
  switch (p) {
    case Party::kBeacon:
      return "beacon";
    case Party::kDongle:
      return "dongle";
    case Party::kNetworkBeacon:
      return "network-beacon";
    case Party::kBackend:
      return "backend";
    case Party::kPirServer:
      return "pir-server";
  }
  return "unknown";
}

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::kAdvertisement:
      return "advertisement";
    case EventKind::kBroadcastCycle:
      return "broadcast-cycle";
    case EventKind::kUpload:
      return "upload";
    case EventKind::kKeyRelease:
      return "key-release";
    case EventKind::kPirRequest:
      return "pir-request";
    case EventKind::kPirResponse:
      return "pir-response";
  }
  return "unknown";
}

namespace {

using backend::IngestResult;
using devices::Beacon;
using devices::DownloadStatus;
using devices::Dongle;

enum class Action : std::uint8_t { kBeaconCrash, kBeaconReboot, kDongleCrash, kDongleReboot };

struct Truth {
  std::size_t beacon = 0;
  std::uint32_t epoch = 0;
};

enum class MatchClass : std::uint8_t { kSelf, kTrue };

class Simulation {
 public:
  Simulation(const Scenario& s, std::uint64_t seed, const RunOptions& options)
      : s_(s), options_(options), master_(seed) {
    result_.metrics.scenario = s.name;
    result_.metrics.seed = seed;
  }

  RunResult run() {
    setup();
    for (Minutes t = 0; t < s_.duration(); ++t) {
      const auto day = static_cast<std::uint32_t>(t / kMinutesPerDay);
      try {
        if (t % kMinutesPerDay == 0) day_start(day);
        minute(t);
        if ((t + 1) % kMinutesPerDay == 0) day_end(day);
      } catch (const SimulationError&) {
        throw;
      } catch (const Error& e) {
        throw SimulationError(day, e.what());
      }
    }
    finish();
    return std::move(result_);
  }

 private:
  DayMetrics& today() { return result_.metrics.days.back(); }

  void event(Minutes t, EventKind kind, Party party, std::size_t sender, std::size_t bytes) {
    if (options_.record_events) result_.events.push_back({t, kind, party, sender, bytes});
  }

  void setup() {
    backend::BackendConfig cfg;
    cfg.epoch_len = s_.epoch_minutes;
    cfg.pipeline.tiling = s_.tiling;
    cfg.pipeline.dp = privacy::dp_params(s_.epsilon, s_.delta, s_.sensitivity);
    cfg.pipeline.payload.annotated = s_.annotated;
    cfg.pipeline.block_cap = s_.block_cap;
    cfg.pipeline.build_pir = s_.retrieval != Retrieval::kBroadcast;
    backend_ = std::make_unique<backend::Backend>(cfg, master_.derive("backend").next_u64());
    server_rng_ = master_.derive("pir-servers");

    for (std::size_t i = 0; i < s_.beacons.size(); ++i) {
      Rng r = master_.derive("beacon", i);
      const auto& reg =
          backend_->registry().register_beacon(s_.beacon_loc(i), Descriptor{s_.beacons[i].desc}, 0, r);
      beacons_.emplace_back(reg, 0, s_.epoch_minutes);
      for (const CrashEvent& c : s_.beacons[i].crashes) {
        actions_[c.at].push_back({Action::kBeaconCrash, i});
        actions_[c.reboot].push_back({Action::kBeaconReboot, i});
      }
    }
    devices::DongleConfig dc;
    dc.epoch_len = s_.epoch_minutes;
    dc.notify_threshold = s_.notify_threshold;
    dc.cuckoo = cfg.pipeline.payload.cuckoo;
    dc.tiling = s_.tiling;
    for (std::size_t u = 0; u < s_.users.size(); ++u) {
      Rng r = master_.derive("dongle-registration", u);
      const auto& reg = backend_->registry().register_dongle(0, r);
      user_of_[reg.id] = u;
      dongles_.emplace_back(reg, 0, dc);
      dongle_rng_.push_back(master_.derive("dongle", u));
      channel_rng_.push_back(master_.derive("channel", u));
      loss_rng_.push_back(master_.derive("loss", u));
      for (const CrashEvent& c : s_.users[u].crashes) {
        actions_[c.at].push_back({Action::kDongleCrash, u});
        actions_[c.reboot].push_back({Action::kDongleReboot, u});
      }
    }
    visit_cursor_.assign(s_.users.size(), 0);
    classes_.resize(s_.users.size());
    false_matches_.resize(s_.users.size());
    result_.metrics.users.resize(s_.users.size());
    for (std::size_t u = 0; u < s_.users.size(); ++u) result_.metrics.users[u].name = s_.users[u].name;
  }

  void minute(Minutes t) {
    if (auto it = actions_.find(t); it != actions_.end()) {
      for (const auto& [action, index] : it->second) {
        switch (action) {
          case Action::kBeaconCrash:
            beacons_[index].crash(t);
            break;
          case Action::kBeaconReboot:
            beacons_[index].reboot(t);
            break;
          case Action::kDongleCrash:
            dongles_[index].crash(t);
            break;
          case Action::kDongleReboot:
            dongles_[index].reboot(t);
            break;
        }
      }
    }

    adverts_.assign(beacons_.size(), std::nullopt);
    for (std::size_t i = 0; i < beacons_.size(); ++i) {
      std::optional<BeaconBroadcast> adv = beacons_[i].tick(t);
      if (!adv) continue;
      truth_.try_emplace(adv->eph, Truth{i, beacons_[i].epoch()});
      adverts_[i] = serialize_broadcast(*adv);
      ++today().advertisements;
      event(t, EventKind::kAdvertisement, Party::kBeacon, i, adverts_[i]->size());
    }

    for (std::size_t u = 0; u < s_.users.size(); ++u) {
      const std::vector<Visit>& visits = s_.users[u].visits;
      std::size_t& k = visit_cursor_[u];
      while (k < visits.size() && visits[k].to <= t) ++k;
      if (k == visits.size() || visits[k].from > t) continue;
      const Visit& v = visits[k];
      if (!adverts_[v.beacon] || !dongles_[u].up()) continue;
      if (s_.channel.reception_probability < 1.0 && !channel_rng_[u].bernoulli(s_.channel.reception_probability)) {
        continue;
      }
      dongles_[u].on_advertisement_bytes(*adverts_[v.beacon], v.rssi, t);
      ++today().receptions;
      captured_.insert(beacons_[v.beacon].current_eph());
    }
  }

  std::vector<EphemeralId> selection_for(const Dongle& d, const Infection& inf) const {
    std::vector<EphemeralId> out;
    for (const devices::LogRecord& r : d.log()) {
      auto it = truth_.find(r.record.eph);
      if (it == truth_.end()) continue;
      if (std::find(inf.selection.begin(), inf.selection.end(), it->second.beacon) != inf.selection.end()) {
        out.push_back(r.record.eph);
      }
    }
    return out;
  }

  void tally(const IngestResult& r) {
    today().encounters_inconsistent += r.inconsistent;
    today().encounters_recovered += r.recovered;
  }

  void day_start(std::uint32_t day) {
    DayMetrics m;
    m.day = day;
    result_.metrics.days.push_back(m);
    counters_at_start_ = backend_->counters();
    const Minutes t0 = Minutes{day} * kMinutesPerDay;

    for (const Infection& inf : s_.infections) {
      if (inf.test_day != day) continue;
      Dongle& d = dongles_[inf.user];
      d.tick(t0);
      const std::optional<std::uint16_t> otp = d.next_unused_otp();
      if (!otp) throw SimulationError(day, "user " + s_.users[inf.user].name + " has no unused OTP left");
      Bytes cert;
      if (inf.mode != backend::UploadMode::kEarly) cert = backend_->authority().issue(d.id(), day);
      std::vector<EphemeralId> sel;
      std::optional<std::span<const EphemeralId>> selection;
      if (inf.mode == backend::UploadMode::kSelective) {
        sel = selection_for(d, inf);
        selection = std::span<const EphemeralId>(sel);
      }
      devices::PreparedUpload up = d.prepare_upload(inf.mode, *otp, std::move(cert), selection, dongle_rng_[inf.user]);
      event(t0, EventKind::kUpload, Party::kDongle, inf.user, backend::serialize_envelope(up.envelope).size());
      tally(backend_->ingest_upload(up.envelope, t0));
      if (up.release) releases_.push_back({inf.user, *up.release});
    }
  }

  void release_keys(std::uint32_t day, Minutes now) {
    for (auto& [user, release] : releases_) {
      release.certificate = backend_->authority().issue(release.dongle, day);
      event(now, EventKind::kKeyRelease, Party::kDongle, user,
            4 + 2 + release.otp.size() + release.key.size() + release.certificate.size());
      tally(backend_->release_escrow(release, now));
    }
    releases_.clear();
  }

  void broadcast_download(std::size_t u, LocationId tile, const backend::TileBroadcast& tb, std::uint32_t day,
                          Minutes now) {
    Dongle& d = dongles_[u];
    devices::NetworkBeacon nb(tile);
    nb.cache(day, tb.wire);
    d.begin_download(day, backend_->public_key());
    const std::size_t per_cycle = nb.packets_per_cycle();
    const std::size_t limit = per_cycle * s_.channel.max_cycles;
    DownloadStatus status = DownloadStatus::kInProgress;
    std::size_t sent = 0;
    std::size_t sent_bytes = 0;
    while (sent < limit && status == DownloadStatus::kInProgress) {
      const devices::BroadcastPacket& p = nb.next_packet();
      ++sent;
      sent_bytes += p.data.size();
      if (s_.channel.packet_loss > 0 && loss_rng_[u].bernoulli(s_.channel.packet_loss)) continue;
      ++today().download_packets;
      today().download_bytes += p.data.size();
      result_.metrics.users[u].download_bytes += p.data.size();
      status = d.on_broadcast_packet(p);
    }
    today().retransmission_cycles += (sent + per_cycle - 1) / per_cycle - 1;
    event(now, EventKind::kBroadcastCycle, Party::kNetworkBeacon, tile.packed, sent_bytes);
    if (status != DownloadStatus::kVerified) {
      d.discard_matches();
      ++today().downloads_failed;
    }
  }

  void pir_retrieve(std::size_t u, std::uint32_t day, Minutes now) {
    Dongle& d = dongles_[u];
    if (!d.next_unused_otp()) throw SimulationError(day, "user " + s_.users[u].name + " has no unused OTP left");
    devices::PirSession session = devices::make_pir_request(d, day, dongle_rng_[u]);
    // Sessions go through the network beacon of the most recently visited tile.
    devices::NetworkBeacon relay(d.log().back().record.loc);
    if (options_.record_relay) {
      relay.set_tap([this](ByteSpan b) { result_.relay_views.emplace_back(b.begin(), b.end()); });
    }
    UserMetrics& um = result_.metrics.users[u];
    for (const devices::PirTileQuery& q : session.queries) {
      std::array<Bytes, backend::kPirServerCount> responses;
      for (std::uint32_t i = 0; i < backend::kPirServerCount; ++i) {
        event(now, EventKind::kPirRequest, Party::kDongle, u, q.requests[i].size());
        responses[i] = relay.relay(q.requests[i], backend_->pir_server(i), backend_->registry(), server_rng_);
        event(now, EventKind::kPirResponse, Party::kPirServer, i, responses[i].size());
        today().query_upload_bytes += q.requests[i].size();
        today().query_download_bytes += responses[i].size();
        um.query_upload_bytes += q.requests[i].size();
        um.query_download_bytes += responses[i].size();
      }
      ++today().query_blocks;
      ++um.query_blocks;
      std::optional<Bytes> block = devices::recover_block(session, responses[0], responses[1]);
      if (!block || !devices::apply_block(d, *block, backend_->public_key())) {
        ++today().downloads_failed;
        continue;
      }
      if (options_.record_relay) result_.recovered_blocks.push_back(std::move(*block));
    }
  }

  void classify(std::size_t u, std::uint32_t day, const std::map<EphemeralId, std::set<std::size_t>>& uploaders) {
    const Dongle& d = dongles_[u];
    for (const devices::LogRecord& r : d.log()) {
      const bool hit = s_.overlap_filter ? r.overlap_matched : r.matched;
      if (!hit) continue;
      auto up = uploaders.find(r.record.eph);
      if (up == uploaders.end()) {
        // A flag set on an earlier day whose upload has since expired keeps
        // its original class.
        if (!classes_[u].count(r.record.eph) && false_matches_[u].insert(r.record.eph).second) {
          ++today().false_matches;
        }
        continue;
      }
      const bool other = std::any_of(up->second.begin(), up->second.end(), [&](std::size_t p) { return p != u; });
      auto [it, fresh] = classes_[u].try_emplace(r.record.eph, other ? MatchClass::kTrue : MatchClass::kSelf);
      if (!fresh && it->second == MatchClass::kTrue) continue;
      if (!fresh && !other) continue;
      it->second = other ? MatchClass::kTrue : MatchClass::kSelf;
      if (!other) {
        ++today().self_matches;
        continue;
      }
      ++today().true_matches;
      auto truth = truth_.find(r.record.eph);
      if (truth != truth_.end()) result_.metrics.true_positives.insert({u, truth->second.beacon, truth->second.epoch});
    }
    const devices::RiskScore score = d.risk_score(s_.overlap_filter);
    UserMetrics& um = result_.metrics.users[u];
    if (score.notify) {
      ++today().notified_users;
      if (!um.notified) {
        um.notified = true;
        um.first_notified_day = day;
      }
    }
  }

  void day_end(std::uint32_t day) {
    const Minutes now = Minutes{day + 1} * kMinutesPerDay;
    release_keys(day, now);

    backend::DailyRisk risk = backend_->run_daily_pipeline(day, now);
    DayMetrics& m = today();
    for (const auto& [tile, tb] : risk.broadcast) {
      digest_.update(tb.wire);
      ++m.broadcast_tiles;
      m.broadcast_bytes += tb.wire.size();
      m.real_ids += tb.noised.real_count;
      m.junk_ids += tb.noised.junk_count;
      result_.metrics.payload_sizes.push_back({day, tile, tb.noised.real_count, tb.noised.junk_count, tb.wire.size()});
    }
    for (const auto& [h, db] : risk.pir) {
      for (const Bytes& b : db.blocks) digest_.update(b);
      m.pir_blocks += db.blocks.size();
    }

    std::map<EphemeralId, std::set<std::size_t>> uploaders;
    for (const backend::RiskDbEntry& e : backend::prune_riskdb(backend_->riskdb(), now)) {
      if (auto it = user_of_.find(e.dongle); it != user_of_.end()) uploaders[e.eph].insert(it->second);
    }

    for (std::size_t u = 0; u < dongles_.size(); ++u) {
      Dongle& d = dongles_[u];
      d.tick(now);
      if (!d.up() || d.log().empty()) continue;
      if (s_.retrieval != Retrieval::kPir) {
        for (LocationId tile : d.visited_tiles()) {
          auto it = risk.broadcast.find(tile);
          if (it != risk.broadcast.end()) broadcast_download(u, tile, it->second, day, now);
        }
      }
      if (s_.retrieval != Retrieval::kBroadcast) pir_retrieve(u, day, now);
      classify(u, day, uploaders);
    }

    const backend::BackendCounters& c = backend_->counters();
    m.uploads = c.uploads - counters_at_start_.uploads;
    m.uploads_rejected = c.uploads_rejected - counters_at_start_.uploads_rejected;
    m.encounters_uploaded = c.encounters_uploaded - counters_at_start_.encounters_uploaded;
    m.encounters_accepted = c.encounters_accepted - counters_at_start_.encounters_accepted;
    m.encounters_rejected = c.encounters_rejected - counters_at_start_.encounters_rejected;
    m.repair_events = c.repair_events - counters_at_start_.repair_events;
    m.anomalies = c.anomalies - counters_at_start_.anomalies;
  }

  void finish() {
    Metrics& m = result_.metrics;
    m.unique_ephemeral_ids = truth_.size();
    m.captured_ids = captured_.size();
    m.unresolved_inconsistencies = backend_->unresolved_start_mismatches();
    for (std::size_t u = 0; u < dongles_.size(); ++u) {
      UserMetrics& um = m.users[u];
      um.log_records = dongles_[u].log().size();
      um.visited_tiles = dongles_[u].visited_tiles().size();
      um.false_positives = false_matches_[u].size();
      for (const auto& [eph, cls] : classes_[u]) um.self_matches += cls == MatchClass::kSelf;
      m.dropped_packets += dongles_[u].dropped_packets();
    }
    for (const Exposure& e : m.true_positives) ++m.users[e.user].true_positives;
    m.payload_digest = digest_.finish();
  }

  const Scenario& s_;
  RunOptions options_;
  Rng master_;
  Rng server_rng_;
  std::unique_ptr<backend::Backend> backend_;
  std::vector<Beacon> beacons_;
  std::vector<Dongle> dongles_;
  std::vector<Rng> dongle_rng_;
  std::vector<Rng> channel_rng_;
  std::vector<Rng> loss_rng_;
  std::map<DeviceId, std::size_t> user_of_;
  std::map<Minutes, std::vector<std::pair<Action, std::size_t>>> actions_;
  std::vector<std::size_t> visit_cursor_;
  std::vector<std::optional<Bytes>> adverts_;
  std::map<EphemeralId, Truth> truth_;
  std::set<EphemeralId> captured_;
  std::vector<std::map<EphemeralId, MatchClass>> classes_;
  std::vector<std::set<EphemeralId>> false_matches_;
  std::vector<std::pair<std::size_t, backend::KeyRelease>> releases_;
  backend::BackendCounters counters_at_start_;
  Sha256 digest_;
  RunResult result_;
};

}  // namespace

RunResult run_scenario(const Scenario& s, std::uint64_t seed, const RunOptions& options) {
  validate_scenario(s);
  return Simulation(s, seed, options).run();
}

}  // namespace silmarillion::simnet
