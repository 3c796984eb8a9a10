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

#include "silmarillion/simnet/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "silmarillion/core/rng.hpp"
#include "silmarillion/privacy/dp_noise.hpp"

namespace silmarillion::simnet {

using nlohmann::json;
using nlohmann::ordered_json;
using ojson = ordered_json;

namespace {

std::string format_error(const std::string& source, std::size_t line, const std::string& pointer,
                         const std::string& message) {
  std::string out = source;
  if (line > 0) out += ":" + std::to_string(line);
  out += ": ";
  if (!pointer.empty()) out += pointer + ": ";
  return out + message;
}

std::string escape_pointer(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

// Input iterator that counts newlines as the parser consumes them.
class LineCountingIterator {
 public:
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  LineCountingIterator(const char* p, std::size_t* line) : p_(p), line_(line) {}
  reference operator*() const { return *p_; }
  LineCountingIterator& operator++() {
    if (*p_ == '\n') ++*line_;
    ++p_;
    return *this;
  }
  LineCountingIterator operator++(int) {
    LineCountingIterator old = *this;
    ++*this;
    return old;
  }
  bool operator==(const LineCountingIterator& o) const { return p_ == o.p_; }
  bool operator!=(const LineCountingIterator& o) const { return p_ != o.p_; }

 private:
  const char* p_;
  std::size_t* line_;
};

// Records the source line of every value, keyed by JSON pointer. Object
// members take the line of their key.
class PositionRecorder : public nlohmann::json_sax<json> {
 public:
  explicit PositionRecorder(const std::size_t* line) : line_(line) {}

  std::map<std::string, std::size_t> lines;

  bool null() override { return scalar(); }
  bool boolean(bool) override { return scalar(); }
  bool number_integer(number_integer_t) override { return scalar(); }
  bool number_unsigned(number_unsigned_t) override { return scalar(); }
  bool number_float(number_float_t, const string_t&) override { return scalar(); }
  bool string(string_t&) override { return scalar(); }
  bool binary(binary_t&) override { return scalar(); }
  bool start_object(std::size_t) override { return open(false); }
  bool start_array(std::size_t) override { return open(true); }
  bool end_object() override { return close(); }
  bool end_array() override { return close(); }
  bool key(string_t& k) override {
    frames_.back().key = escape_pointer(k);
    lines[pointer()] = *line_;
    return true;
  }
  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception&) override {
    return false;
  }

 private:
  struct Frame {
    bool array = false;
    std::size_t index = 0;
    std::string key;
  };

  std::string pointer() const {
    std::string p;
    for (const Frame& f : frames_) p += "/" + (f.array ? std::to_string(f.index) : f.key);
    return p;
  }
  void begin_value() {
    if (frames_.empty()) {
      lines[""] = *line_;
    } else if (frames_.back().array) {
      lines[pointer()] = *line_;
    }
  }
  void end_value() {
    if (!frames_.empty() && frames_.back().array) ++frames_.back().index;
  }
  bool scalar() {
    begin_value();
    end_value();
    return true;
  }
  bool open(bool array) {
    begin_value();
    frames_.push_back({array, 0, {}});
    return true;
  }
  bool close() {
    frames_.pop_back();
    end_value();
    return true;
  }

  const std::size_t* line_;
  std::vector<Frame> frames_;
};

class Doc {
 public:
  Doc(std::string source, std::map<std::string, std::size_t> lines)
      : source_(std::move(source)), lines_(std::move(lines)) {}

  [[noreturn]] void fail(const std::string& pointer, const std::string& message) const {
    throw ScenarioError(source_, line_of(pointer), pointer, message);
  }

  std::size_t line_of(std::string pointer) const {
    while (true) {
      auto it = lines_.find(pointer);
      if (it != lines_.end()) return it->second;
      if (pointer.empty()) return 0;
      pointer.erase(pointer.rfind('/'));
    }
  }

  void allow_keys(const json& obj, const std::string& ptr, std::initializer_list<const char*> keys) const {
    if (!obj.is_object()) fail(ptr, "expected an object");
    for (const auto& [k, v] : obj.items()) {
      if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; })) {
        fail(ptr + "/" + escape_pointer(k), "unknown field '" + k + "'");
      }
    }
  }

  const json* member(const json& obj, const std::string& ptr, const char* key, bool required) const {
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) fail(ptr, std::string("missing required field '") + key + "'");
      return nullptr;
    }
    return &*it;
  }

  std::int64_t integer(const json& v, const std::string& ptr, std::int64_t lo, std::int64_t hi) const {
    if (!v.is_number_integer()) fail(ptr, "expected an integer");
    if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(hi)) {
      fail(ptr, "value out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    const std::int64_t x = v.get<std::int64_t>();
    if (x < lo || x > hi) fail(ptr, "value out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return x;
  }

  double number(const json& v, const std::string& ptr) const {
    if (!v.is_number()) fail(ptr, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(ptr, "expected a finite number");
    return x;
  }

  std::string string(const json& v, const std::string& ptr) const {
    if (!v.is_string()) fail(ptr, "expected a string");
    return v.get<std::string>();
  }

  bool boolean(const json& v, const std::string& ptr) const {
    if (!v.is_boolean()) fail(ptr, "expected true or false");
    return v.get<bool>();
  }

  const json& array(const json& v, const std::string& ptr) const {
    if (!v.is_array()) fail(ptr, "expected an array");
    return v;
  }

 private:
  std::string source_;
  std::map<std::string, std::size_t> lines_;
};

constexpr std::int64_t kMaxU32 = std::numeric_limits<std::uint32_t>::max();
constexpr std::int64_t kMaxMinutes = std::int64_t{1} << 40;

std::vector<CrashEvent> parse_crashes(const Doc& doc, const json& obj, const std::string& ptr) {
  std::vector<CrashEvent> out;
  const json* cs = doc.member(obj, ptr, "crashes", false);
  if (!cs) return out;
  const std::string base = ptr + "/crashes";
  doc.array(*cs, base);
  for (std::size_t i = 0; i < cs->size(); ++i) {
    const std::string p = base + "/" + std::to_string(i);
    const json& c = (*cs)[i];
    doc.allow_keys(c, p, {"at", "reboot"});
    CrashEvent e;
    e.at = doc.integer(*doc.member(c, p, "at", true), p + "/at", 0, kMaxMinutes);
    e.reboot = doc.integer(*doc.member(c, p, "reboot", true), p + "/reboot", 0, kMaxMinutes);
    out.push_back(e);
  }
  return out;
}

using Fail = std::function<void(const std::string&, const std::string&)>;

void check_crashes(const std::vector<CrashEvent>& cs, Minutes duration, const std::string& ptr, const Fail& fail) {
  Minutes prev = -1;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const std::string p = ptr + "/crashes/" + std::to_string(i);
    if (cs[i].reboot <= cs[i].at) fail(p + "/reboot", "reboot must come after the crash");
    if (cs[i].at <= prev) fail(p + "/at", "crashes must be time-ordered and not overlap");
    if (cs[i].reboot > duration) fail(p + "/reboot", "reboot after the end of the scenario");
    prev = cs[i].reboot;
  }
}

void check(const Scenario& s, const Fail& fail) {
  if (s.days < 1) fail("/days", "a scenario lasts at least one day");
  if (s.epoch_minutes < 1 || kMinutesPerDay % s.epoch_minutes != 0) {
    fail("/epoch_minutes", "epoch length must divide a day");
  }
  try {
    s.tiling.validate();
  } catch (const ParameterError& e) {
    fail("/tiling", e.what());
  }
  const Minutes duration = s.duration();

  std::set<std::string> names;
  for (std::size_t i = 0; i < s.beacons.size(); ++i) {
    const BeaconSpec& b = s.beacons[i];
    const std::string p = "/beacons/" + std::to_string(i);
    if (b.name.empty()) fail(p + "/name", "beacon name is empty");
    if (!names.insert(b.name).second) fail(p + "/name", "duplicate beacon '" + b.name + "'");
    if (b.tile.h >> s.tiling.h_bits || b.tile.m >> s.tiling.m_bits || b.tile.l >> s.tiling.l_bits) {
      fail(p + "/tile", "tile coordinates exceed the tiling widths");
    }
    check_crashes(b.crashes, duration, p, fail);
  }

  names.clear();
  for (std::size_t u = 0; u < s.users.size(); ++u) {
    const UserSpec& user = s.users[u];
    const std::string p = "/users/" + std::to_string(u);
    if (user.name.empty()) fail(p + "/name", "user name is empty");
    if (!names.insert(user.name).second) fail(p + "/name", "duplicate user '" + user.name + "'");
    Minutes prev_end = 0;
    for (std::size_t i = 0; i < user.visits.size(); ++i) {
      const Visit& v = user.visits[i];
      const std::string vp = p + "/visits/" + std::to_string(i);
      if (v.beacon >= s.beacons.size()) fail(vp + "/beacon", "undeclared beacon");
      if (v.to <= v.from) fail(vp + "/to", "visit must end after it starts");
      if (v.from < prev_end) fail(vp + "/from", "visits must be time-ordered and not overlap");
      if (v.to > duration) fail(vp + "/to", "visit runs past the end of the scenario");
      prev_end = v.to;
    }
    check_crashes(user.crashes, duration, p, fail);
  }

  std::set<std::size_t> infected;
  for (std::size_t i = 0; i < s.infections.size(); ++i) {
    const Infection& inf = s.infections[i];
    const std::string p = "/infections/" + std::to_string(i);
    if (inf.user >= s.users.size()) fail(p + "/user", "undeclared user");
    if (!infected.insert(inf.user).second) fail(p + "/user", "user is already infected");
    if (inf.test_day >= s.days) fail(p + "/test_day", "test day outside the scenario");
    if (inf.mode != backend::UploadMode::kSelective && !inf.selection.empty()) {
      fail(p + "/selection", "selection is only meaningful in selective mode");
    }
    for (std::size_t b : inf.selection) {
      if (b >= s.beacons.size()) fail(p + "/selection", "undeclared beacon");
    }
  }

  const ChannelSpec& c = s.channel;
  if (!(c.reception_probability >= 0 && c.reception_probability <= 1)) {
    fail("/channel/reception_probability", "probability must lie in [0, 1]");
  }
  if (!(c.packet_loss >= 0 && c.packet_loss < 1)) fail("/channel/packet_loss", "loss must lie in [0, 1)");
  if (c.max_cycles < 1) fail("/channel/max_cycles", "at least one broadcast cycle is needed");
  try {
    privacy::dp_params(s.epsilon, s.delta, s.sensitivity);
  } catch (const ParameterError& e) {
    fail("/privacy", e.what());
  }
  if (s.block_cap == 0) fail("/pir/block_cap", "block cap must be positive");
  if (s.overlap_filter && !s.annotated) fail("/risk/overlap_filter", "the overlap filter needs annotated payloads");
}

Retrieval retrieval_from(const Doc& doc, const std::string& name, const std::string& ptr) {
  if (name == "broadcast") return Retrieval::kBroadcast;
  if (name == "pir") return Retrieval::kPir;
  if (name == "both") return Retrieval::kBoth;
  doc.fail(ptr, "unknown retrieval '" + name + "' (broadcast, pir or both)");
}

Scenario from_json(const json& root, const Doc& doc) {
  Scenario s;
  doc.allow_keys(root, "", {"name", "days", "epoch_minutes", "tiling", "beacons", "users", "infections",
                            "channel", "privacy", "pir", "risk"});
  if (const json* v = doc.member(root, "", "name", false)) s.name = doc.string(*v, "/name");
  s.days = static_cast<std::uint32_t>(doc.integer(*doc.member(root, "", "days", true), "/days", 1, 100000));
  if (const json* v = doc.member(root, "", "epoch_minutes", false)) {
    s.epoch_minutes = static_cast<std::uint32_t>(doc.integer(*v, "/epoch_minutes", 1, kMinutesPerDay));
  }
  if (const json* t = doc.member(root, "", "tiling", false)) {
    doc.allow_keys(*t, "/tiling", {"h_bits", "m_bits", "l_bits"});
    s.tiling.h_bits = static_cast<unsigned>(doc.integer(*doc.member(*t, "/tiling", "h_bits", true), "/tiling/h_bits", 0, 32));
    s.tiling.m_bits = static_cast<unsigned>(doc.integer(*doc.member(*t, "/tiling", "m_bits", true), "/tiling/m_bits", 0, 32));
    s.tiling.l_bits = static_cast<unsigned>(doc.integer(*doc.member(*t, "/tiling", "l_bits", true), "/tiling/l_bits", 0, 32));
  }

  std::map<std::string, std::size_t> beacon_index;
  const json& beacons = doc.array(*doc.member(root, "", "beacons", true), "/beacons");
  for (std::size_t i = 0; i < beacons.size(); ++i) {
    const std::string p = "/beacons/" + std::to_string(i);
    const json& b = beacons[i];
    doc.allow_keys(b, p, {"name", "tile", "desc", "crashes"});
    BeaconSpec spec;
    spec.name = doc.string(*doc.member(b, p, "name", true), p + "/name");
    const json& tile = doc.array(*doc.member(b, p, "tile", true), p + "/tile");
    if (tile.size() != 3) doc.fail(p + "/tile", "tile is [h, m, l]");
    spec.tile.h = static_cast<std::uint32_t>(doc.integer(tile[0], p + "/tile/0", 0, kMaxU32));
    spec.tile.m = static_cast<std::uint32_t>(doc.integer(tile[1], p + "/tile/1", 0, kMaxU32));
    spec.tile.l = static_cast<std::uint32_t>(doc.integer(tile[2], p + "/tile/2", 0, kMaxU32));
    if (const json* v = doc.member(b, p, "desc", false)) {
      spec.desc = static_cast<std::uint32_t>(doc.integer(*v, p + "/desc", 0, kMaxU32));
    }
    spec.crashes = parse_crashes(doc, b, p);
    if (!beacon_index.emplace(spec.name, i).second) doc.fail(p + "/name", "duplicate beacon '" + spec.name + "'");
    s.beacons.push_back(std::move(spec));
  }
  auto beacon_ref = [&](const json& v, const std::string& p) {
    const std::string name = doc.string(v, p);
    auto it = beacon_index.find(name);
    if (it == beacon_index.end()) doc.fail(p, "undeclared beacon '" + name + "'");
    return it->second;
  };

  std::map<std::string, std::size_t> user_index;
  const json& users = doc.array(*doc.member(root, "", "users", true), "/users");
  for (std::size_t u = 0; u < users.size(); ++u) {
    const std::string p = "/users/" + std::to_string(u);
    const json& j = users[u];
    doc.allow_keys(j, p, {"name", "visits", "crashes"});
    UserSpec user;
    user.name = doc.string(*doc.member(j, p, "name", true), p + "/name");
    if (const json* vs = doc.member(j, p, "visits", false)) {
      doc.array(*vs, p + "/visits");
      for (std::size_t i = 0; i < vs->size(); ++i) {
        const std::string vp = p + "/visits/" + std::to_string(i);
        const json& v = (*vs)[i];
        doc.allow_keys(v, vp, {"beacon", "from", "to", "rssi"});
        Visit visit;
        visit.beacon = beacon_ref(*doc.member(v, vp, "beacon", true), vp + "/beacon");
        visit.from = doc.integer(*doc.member(v, vp, "from", true), vp + "/from", 0, kMaxMinutes);
        visit.to = doc.integer(*doc.member(v, vp, "to", true), vp + "/to", 0, kMaxMinutes);
        if (const json* r = doc.member(v, vp, "rssi", false)) {
          visit.rssi = static_cast<std::int8_t>(doc.integer(*r, vp + "/rssi", -128, 127));
        }
        user.visits.push_back(visit);
      }
    }
    user.crashes = parse_crashes(doc, j, p);
    if (!user_index.emplace(user.name, u).second) doc.fail(p + "/name", "duplicate user '" + user.name + "'");
    s.users.push_back(std::move(user));
  }

  if (const json* infs = doc.member(root, "", "infections", false)) {
    doc.array(*infs, "/infections");
    for (std::size_t i = 0; i < infs->size(); ++i) {
      const std::string p = "/infections/" + std::to_string(i);
      const json& j = (*infs)[i];
      doc.allow_keys(j, p, {"user", "test_day", "mode", "selection"});
      Infection inf;
      const std::string name = doc.string(*doc.member(j, p, "user", true), p + "/user");
      auto it = user_index.find(name);
      if (it == user_index.end()) doc.fail(p + "/user", "undeclared user '" + name + "'");
      inf.user = it->second;
      inf.test_day = static_cast<std::uint32_t>(doc.integer(*doc.member(j, p, "test_day", true), p + "/test_day", 0, kMaxU32));
      if (const json* m = doc.member(j, p, "mode", false)) {
        try {
          inf.mode = backend::upload_mode_from_string(doc.string(*m, p + "/mode"));
        } catch (const ParameterError& e) {
          doc.fail(p + "/mode", e.what());
        }
      }
      if (const json* sel = doc.member(j, p, "selection", false)) {
        doc.array(*sel, p + "/selection");
        for (std::size_t k = 0; k < sel->size(); ++k) {
          inf.selection.push_back(beacon_ref((*sel)[k], p + "/selection/" + std::to_string(k)));
        }
      }
      s.infections.push_back(std::move(inf));
    }
  }

  if (const json* c = doc.member(root, "", "channel", false)) {
    doc.allow_keys(*c, "/channel", {"reception_probability", "packet_loss", "max_cycles"});
    if (const json* v = doc.member(*c, "/channel", "reception_probability", false)) {
      s.channel.reception_probability = doc.number(*v, "/channel/reception_probability");
    }
    if (const json* v = doc.member(*c, "/channel", "packet_loss", false)) {
      s.channel.packet_loss = doc.number(*v, "/channel/packet_loss");
    }
    if (const json* v = doc.member(*c, "/channel", "max_cycles", false)) {
      s.channel.max_cycles = static_cast<std::size_t>(doc.integer(*v, "/channel/max_cycles", 1, 1 << 20));
    }
  }
  if (const json* pv = doc.member(root, "", "privacy", false)) {
    doc.allow_keys(*pv, "/privacy", {"epsilon", "delta", "sensitivity"});
    if (const json* v = doc.member(*pv, "/privacy", "epsilon", false)) s.epsilon = doc.number(*v, "/privacy/epsilon");
    if (const json* v = doc.member(*pv, "/privacy", "delta", false)) s.delta = doc.number(*v, "/privacy/delta");
    if (const json* v = doc.member(*pv, "/privacy", "sensitivity", false)) {
      s.sensitivity = static_cast<std::uint32_t>(doc.integer(*v, "/privacy/sensitivity", 1, kMaxU32));
    }
  }
  if (const json* pir = doc.member(root, "", "pir", false)) {
    doc.allow_keys(*pir, "/pir", {"block_cap"});
    if (const json* v = doc.member(*pir, "/pir", "block_cap", false)) {
      s.block_cap = static_cast<std::size_t>(doc.integer(*v, "/pir/block_cap", 1, kMaxU32));
    }
  }
  if (const json* r = doc.member(root, "", "risk", false)) {
    doc.allow_keys(*r, "/risk", {"annotated", "overlap_filter", "notify_threshold", "retrieval"});
    if (const json* v = doc.member(*r, "/risk", "annotated", false)) s.annotated = doc.boolean(*v, "/risk/annotated");
    if (const json* v = doc.member(*r, "/risk", "overlap_filter", false)) {
      s.overlap_filter = doc.boolean(*v, "/risk/overlap_filter");
    }
    if (const json* v = doc.member(*r, "/risk", "notify_threshold", false)) {
      s.notify_threshold = static_cast<std::uint32_t>(doc.integer(*v, "/risk/notify_threshold", 0, kMaxU32));
    }
    if (const json* v = doc.member(*r, "/risk", "retrieval", false)) {
      s.retrieval = retrieval_from(doc, doc.string(*v, "/risk/retrieval"), "/risk/retrieval");
    }
  }

  check(s, [&](const std::string& ptr, const std::string& msg) { doc.fail(ptr, msg); });
  return s;
}

ojson crashes_json(const std::vector<CrashEvent>& cs) {
  ojson a = ojson::array();
  for (const CrashEvent& c : cs) a.push_back({{"at", c.at}, {"reboot", c.reboot}});
  return a;
}

// Pretty printer that keeps values of up to 100 characters on one line.
void write_compact(std::ostream& os, const ojson& j, int indent) {
  if (!j.is_structured() || j.dump().size() <= 100) {
    os << j.dump();
    return;
  }
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  os << (j.is_object() ? "{\n" : "[\n");
  std::size_t i = 0;
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      os << pad << ojson(k).dump() << ": ";
      write_compact(os, v, indent + 2);
      os << (++i < j.size() ? ",\n" : "\n");
    }
  } else {
    for (const ojson& v : j) {
      os << pad;
      write_compact(os, v, indent + 2);
      os << (++i < j.size() ? ",\n" : "\n");
    }
  }
  os << std::string(static_cast<std::size_t>(indent), ' ') << (j.is_object() ? "}" : "]");
}

}  // namespace

ScenarioError::ScenarioError(std::string source, std::size_t line, std::string pointer, const std::string& message)
    : Error(format_error(source, line, pointer, message)),
      source_(std::move(source)),
      line_(line),
      pointer_(std::move(pointer)) {}

const char* to_string(Retrieval r) {
  switch (r) {
    case Retrieval::kBroadcast:
      return "broadcast";
    case Retrieval::kPir:
      return "pir";
    case Retrieval::kBoth:
      return "both";
  }
  return "unknown";
}

Scenario parse_scenario(const std::string& text, const std::string& source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + upto, '\n'));
    throw ScenarioError(source, line, "", std::string("invalid JSON: ") + e.what());
  }
  std::size_t line = 1;
  PositionRecorder rec(&line);
  const char* begin = text.data();
  json::sax_parse(LineCountingIterator(begin, &line), LineCountingIterator(begin + text.size(), &line), &rec);
  return from_json(root, Doc(source, std::move(rec.lines)));
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError(path, 0, "", "cannot open scenario file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path);
}

void validate_scenario(const Scenario& s) {
  check(s, [&](const std::string& ptr, const std::string& msg) { throw ScenarioError(s.name, 0, ptr, msg); });
}

std::string scenario_to_json(const Scenario& s) {
  ojson root = ojson::object();
  root["name"] = s.name;
  root["days"] = s.days;
  root["epoch_minutes"] = s.epoch_minutes;
  root["tiling"] = {{"h_bits", s.tiling.h_bits}, {"m_bits", s.tiling.m_bits}, {"l_bits", s.tiling.l_bits}};
  ojson beacons = ojson::array();
  for (const BeaconSpec& b : s.beacons) {
    ojson j = {{"name", b.name}, {"tile", {b.tile.h, b.tile.m, b.tile.l}}, {"desc", b.desc}};
    if (!b.crashes.empty()) j["crashes"] = crashes_json(b.crashes);
    beacons.push_back(std::move(j));
  }
  root["beacons"] = std::move(beacons);
  ojson users = ojson::array();
  for (const UserSpec& u : s.users) {
    ojson visits = ojson::array();
    for (const Visit& v : u.visits) {
      visits.push_back({{"beacon", s.beacons[v.beacon].name}, {"from", v.from}, {"to", v.to}, {"rssi", v.rssi}});
    }
    ojson j = {{"name", u.name}, {"visits", std::move(visits)}};
    if (!u.crashes.empty()) j["crashes"] = crashes_json(u.crashes);
    users.push_back(std::move(j));
  }
  root["users"] = std::move(users);
  ojson infections = ojson::array();
  for (const Infection& inf : s.infections) {
    ojson j = {{"user", s.users[inf.user].name}, {"test_day", inf.test_day}, {"mode", backend::to_string(inf.mode)}};
    if (inf.mode == backend::UploadMode::kSelective) {
      ojson sel = ojson::array();
      for (std::size_t b : inf.selection) sel.push_back(s.beacons[b].name);
      j["selection"] = std::move(sel);
    }
    infections.push_back(std::move(j));
  }
  root["infections"] = std::move(infections);
  root["channel"] = {{"reception_probability", s.channel.reception_probability},
                     {"packet_loss", s.channel.packet_loss},
                     {"max_cycles", s.channel.max_cycles}};
  root["privacy"] = {{"epsilon", s.epsilon}, {"delta", s.delta}, {"sensitivity", s.sensitivity}};
  root["pir"] = {{"block_cap", s.block_cap}};
  root["risk"] = {{"annotated", s.annotated},
                  {"overlap_filter", s.overlap_filter},
                  {"notify_threshold", s.notify_threshold},
                  {"retrieval", to_string(s.retrieval)}};
  std::ostringstream os;
  write_compact(os, root, 0);
  os << "\n";
  return os.str();
}

void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << scenario_to_json(s);
  if (!out) throw Error("write failed for " + path);
}

Scenario make_pilot_scenario(std::uint64_t seed) {
  Rng rng = Rng(seed).derive("pilot-scenario");
  Scenario s;
  s.name = "pilot";
  s.days = 16;
  for (std::uint32_t i = 0; i < 8; ++i) {
    s.beacons.push_back({"room-" + std::to_string(i + 1), {1180, 37, 5123}, i + 1, {}});
  }
  for (int u = 0; u < 15; ++u) {
    UserSpec user;
    user.name = (u < 9 ? "volunteer-0" : "volunteer-") + std::to_string(u + 1);
    for (std::uint32_t day = 0; day < s.days; ++day) {
      if (!rng.bernoulli(0.85)) continue;
      const Minutes base = Minutes{day} * kMinutesPerDay;
      Minutes t = base + 510 + static_cast<Minutes>(rng.below(90));
      const Minutes leave = base + 990 + static_cast<Minutes>(rng.below(120));
      while (t < leave) {
        const Minutes stay = 20 + static_cast<Minutes>(rng.below(100));
        const auto beacon = static_cast<std::size_t>(rng.below(s.beacons.size()));
        const auto rssi = static_cast<std::int8_t>(-50 - static_cast<int>(rng.below(30)));
        user.visits.push_back({beacon, t, std::min(t + stay, leave), rssi});
        t += stay + 5 + static_cast<Minutes>(rng.below(25));
      }
    }
    s.users.push_back(std::move(user));
  }
  // Three of the app users upload on distinct days.
  std::vector<std::uint32_t> days;
  while (days.size() < 3) {
    const auto d = static_cast<std::uint32_t>(3 + rng.below(12));
    if (std::find(days.begin(), days.end(), d) == days.end()) days.push_back(d);
  }
  std::sort(days.begin(), days.end());
  for (std::size_t i = 0; i < 3; ++i) s.infections.push_back({10 + 2 * i, days[i], backend::UploadMode::kDelayed, {}});
  validate_scenario(s);
  return s;
}

Scenario random_scenario(std::uint64_t seed, const RandomScenarioLimits& limits) {
  Rng rng = Rng(seed).derive("random-scenario");
  Scenario s;
  s.name = "random-" + std::to_string(seed);
  s.days = 1 + static_cast<std::uint32_t>(rng.below(limits.max_days));
  s.tiling = TilingParams{26, 2, 4};
  s.epsilon = 0.5;
  s.delta = 0.01;
  s.sensitivity = 8;
  s.block_cap = 1 << 16;
  s.annotated = rng.bernoulli(0.5);
  s.overlap_filter = s.annotated && rng.bernoulli(0.5);
  s.retrieval = static_cast<Retrieval>(rng.below(3));

  const std::size_t nb = 1 + rng.below(limits.max_beacons);
  for (std::size_t i = 0; i < nb; ++i) {
    const TileCoords tile{static_cast<std::uint32_t>(rng.below(2)), static_cast<std::uint32_t>(rng.below(4)),
                          static_cast<std::uint32_t>(rng.below(16))};
    s.beacons.push_back({"b" + std::to_string(i), tile, static_cast<std::uint32_t>(i), {}});
  }
  const std::size_t nu = 1 + rng.below(limits.max_users);
  for (std::size_t u = 0; u < nu; ++u) {
    UserSpec user;
    user.name = "u" + std::to_string(u);
    for (std::uint32_t day = 0; day < s.days; ++day) {
      Minutes t = Minutes{day} * kMinutesPerDay + static_cast<Minutes>(rng.below(300));
      const Minutes end = Minutes{day + 1} * kMinutesPerDay;
      const std::size_t visits = rng.below(7);
      for (std::size_t k = 0; k < visits && t < end; ++k) {
        const Minutes to = std::min(end, t + 1 + static_cast<Minutes>(rng.below(90)));
        user.visits.push_back({static_cast<std::size_t>(rng.below(nb)), t, to, -60});
        t = to + static_cast<Minutes>(rng.below(180));
      }
    }
    s.users.push_back(std::move(user));
  }
  const std::size_t ni = std::min<std::size_t>(nu, rng.below(limits.max_infections + 1));
  std::vector<std::size_t> order(nu);
  for (std::size_t i = 0; i < nu; ++i) order[i] = i;
  rng.shuffle(std::span<std::size_t>(order));
  for (std::size_t i = 0; i < ni; ++i) {
    Infection inf;
    inf.user = order[i];
    inf.test_day = static_cast<std::uint32_t>(rng.below(s.days));
    inf.mode = static_cast<backend::UploadMode>(1 + rng.below(3));
    if (inf.mode == backend::UploadMode::kSelective) {
      for (std::size_t b = 0; b < nb; ++b) {
        if (rng.bernoulli(0.5)) inf.selection.push_back(b);
      }
    }
    s.infections.push_back(std::move(inf));
  }
  validate_scenario(s);
  return s;
}

}  // namespace silmarillion::simnet
