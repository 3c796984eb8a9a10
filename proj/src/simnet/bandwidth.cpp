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

#include "silmarillion/simnet/bandwidth.hpp"

#include <sstream>

namespace silmarillion::simnet {

BandwidthReport bandwidth_report(const Metrics& m, const Scenario& s) {
  BandwidthReport r;
  for (const DayMetrics& d : m.days) {
    r.broadcast_bytes_per_day.push_back(d.broadcast_bytes);
    r.broadcast_bytes += d.broadcast_bytes;
    r.real_ids += d.real_ids;
  }
  for (std::size_t u = 0; u < m.users.size() && u < s.users.size(); ++u) {
    const UserMetrics& um = m.users[u];
    r.users.push_back({um.name, um.visited_tiles, um.query_blocks, um.query_upload_bytes, um.query_download_bytes,
                       um.download_bytes});
  }
  return r;
}

std::string bandwidth_csv(const BandwidthReport& r) {
  std::ostringstream os;
  os << "series,key,value\n";
  for (std::size_t d = 0; d < r.broadcast_bytes_per_day.size(); ++d) {
    os << "broadcast_bytes," << d << ',' << r.broadcast_bytes_per_day[d] << '\n';
  }
  for (const UserBandwidth& u : r.users) {
    os << "visited_tiles," << u.name << ',' << u.visited_tiles << '\n';
    os << "query_blocks," << u.name << ',' << u.query_blocks << '\n';
    os << "query_upload_bytes," << u.name << ',' << u.query_upload_bytes << '\n';
    os << "query_download_bytes," << u.name << ',' << u.query_download_bytes << '\n';
    os << "broadcast_download_bytes," << u.name << ',' << u.broadcast_download_bytes << '\n';
  }
  return os.str();
}

}  // namespace silmarillion::simnet
