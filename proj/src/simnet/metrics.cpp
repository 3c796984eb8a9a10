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

#include "silmarillion/simnet/metrics.hpp"

#include <iomanip>
#include <sstream>
#include <utility>

#include "silmarillion/core/bytes.hpp"

namespace silmarillion::simnet {

namespace {

using Field = std::pair<const char*, std::size_t DayMetrics::*>;

const std::vector<Field>& day_fields() {
  static const std::vector<Field> fields = {
      {"advertisements", &DayMetrics::advertisements},
      {"receptions", &DayMetrics::receptions},
      {"broadcast_tiles", &DayMetrics::broadcast_tiles},
      {"broadcast_bytes", &DayMetrics::broadcast_bytes},
      {"real_ids", &DayMetrics::real_ids},
      {"junk_ids", &DayMetrics::junk_ids},
      {"pir_blocks", &DayMetrics::pir_blocks},
      {"download_packets", &DayMetrics::download_packets},
      {"download_bytes", &DayMetrics::download_bytes},
      {"retransmission_cycles", &DayMetrics::retransmission_cycles},
      {"downloads_failed", &DayMetrics::downloads_failed},
      {"query_upload_bytes", &DayMetrics::query_upload_bytes},
      {"query_download_bytes", &DayMetrics::query_download_bytes},
      {"query_blocks", &DayMetrics::query_blocks},
      {"uploads", &DayMetrics::uploads},
      {"uploads_rejected", &DayMetrics::uploads_rejected},
      {"encounters_uploaded", &DayMetrics::encounters_uploaded},
      {"encounters_accepted", &DayMetrics::encounters_accepted},
      {"encounters_rejected", &DayMetrics::encounters_rejected},
      {"encounters_inconsistent", &DayMetrics::encounters_inconsistent},
      {"encounters_recovered", &DayMetrics::encounters_recovered},
      {"repair_events", &DayMetrics::repair_events},
      {"anomalies", &DayMetrics::anomalies},
      {"true_matches", &DayMetrics::true_matches},
      {"false_matches", &DayMetrics::false_matches},
      {"self_matches", &DayMetrics::self_matches},
      {"notified_users", &DayMetrics::notified_users},
  };
  return fields;
}

void row(std::ostream& os, const std::string& day, const std::string& metric, std::size_t value) {
  os << day << ',' << metric << ',' << value << '\n';
}

}  // namespace

std::size_t Metrics::total(std::size_t DayMetrics::*field) const {
  std::size_t sum = 0;
  for (const DayMetrics& d : days) sum += d.*field;
  return sum;
}

std::string metrics_csv(const Metrics& m) {
  std::ostringstream os;
  os << "day,metric,value\n";
  for (const DayMetrics& d : m.days) {
    const std::string day = std::to_string(d.day);
    for (const auto& [name, field] : day_fields()) row(os, day, name, d.*field);
  }
  for (const UserMetrics& u : m.users) {
    const std::string p = "user." + u.name + ".";
    row(os, "summary", p + "log_records", u.log_records);
    row(os, "summary", p + "visited_tiles", u.visited_tiles);
    row(os, "summary", p + "true_positives", u.true_positives);
    row(os, "summary", p + "false_positives", u.false_positives);
    row(os, "summary", p + "self_matches", u.self_matches);
    row(os, "summary", p + "notified", u.notified ? 1 : 0);
    row(os, "summary", p + "query_upload_bytes", u.query_upload_bytes);
    row(os, "summary", p + "query_download_bytes", u.query_download_bytes);
    row(os, "summary", p + "query_blocks", u.query_blocks);
    row(os, "summary", p + "download_bytes", u.download_bytes);
  }
  for (const auto& [name, field] : day_fields()) row(os, "summary", name, m.total(field));
  row(os, "summary", "unique_ephemeral_ids", m.unique_ephemeral_ids);
  row(os, "summary", "captured_ids", m.captured_ids);
  row(os, "summary", "true_positive_exposures", m.true_positives.size());
  row(os, "summary", "unresolved_inconsistencies", m.unresolved_inconsistencies);
  row(os, "summary", "dropped_packets", m.dropped_packets);
  return os.str();
}

std::string payload_sizes_csv(const Metrics& m) {
  std::ostringstream os;
  os << "day,tile,real_ids,junk_ids,bytes\n";
  for (const PayloadSize& p : m.payload_sizes) {
    os << p.day << ',' << p.tile.packed << ',' << p.real_ids << ',' << p.junk_ids << ',' << p.bytes << '\n';
  }
  return os.str();
}

std::string summary_text(const Metrics& m) {
  std::ostringstream os;
  os << "scenario: " << m.scenario << "\n";
  os << "seed: " << m.seed << "\n";
  os << "days: " << m.days.size() << "\n";
  os << "unique ephemeral ids: " << m.unique_ephemeral_ids << "\n";
  os << "captured ids: " << m.captured_ids << "\n";
  os << "uploads: " << m.total(&DayMetrics::uploads) << " (" << m.total(&DayMetrics::uploads_rejected)
     << " rejected)\n";
  os << "encounters uploaded/accepted/rejected: " << m.total(&DayMetrics::encounters_uploaded) << "/"
     << m.total(&DayMetrics::encounters_accepted) << "/" << m.total(&DayMetrics::encounters_rejected) << "\n";
  os << "repair events: " << m.total(&DayMetrics::repair_events)
     << ", unresolved inconsistencies: " << m.unresolved_inconsistencies << "\n";
  os << "travel anomalies: " << m.total(&DayMetrics::anomalies) << "\n";
  os << "broadcast bytes: " << m.total(&DayMetrics::broadcast_bytes)
     << ", downloaded: " << m.total(&DayMetrics::download_bytes)
     << ", retransmission cycles: " << m.total(&DayMetrics::retransmission_cycles) << "\n";
  os << "query bytes up/down: " << m.total(&DayMetrics::query_upload_bytes) << "/"
     << m.total(&DayMetrics::query_download_bytes) << "\n";
  os << "true-positive exposures: " << m.true_positives.size() << "\n";
  os << "\n" << std::left << std::setw(20) << "user" << std::right << std::setw(9) << "records" << std::setw(7)
     << "tiles" << std::setw(7) << "true" << std::setw(7) << "false" << std::setw(7) << "self"
     << "  notified\n";
  for (const UserMetrics& u : m.users) {
    os << std::left << std::setw(20) << u.name << std::right << std::setw(9) << u.log_records << std::setw(7)
       << u.visited_tiles << std::setw(7) << u.true_positives << std::setw(7) << u.false_positives
       << std::setw(7) << u.self_matches << "  ";
    if (u.notified) {
      os << "day " << u.first_notified_day;
    } else {
      os << "no";
    }
    os << "\n";
  }
  os << "\npayload digest: " << to_hex(m.payload_digest) << "\n";
  return os.str();
}

}  // namespace silmarillion::simnet
