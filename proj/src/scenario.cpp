#include "rfidnet/scenario.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>
#include <unordered_set>

namespace rfidnet {

ScenarioError::ScenarioError(std::string field, std::size_t line, const std::string& what)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + field + ": " + what
                              : field + ": " + what),
      field_(std::move(field)),
      line_(line) {}

std::optional<std::size_t> Scenario::node_index(std::string_view node_id) const noexcept {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].node_id == node_id) return i;
  return std::nullopt;
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ScenarioError(field, 0, what);
}

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) fail(field, what);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }
bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  // Keep it recognisably a float so the reader never sees "1" for 1.0.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

struct RawValue {
  std::string text;
  std::size_t line = 0;
  bool quoted = false;
};

class Reader {
 public:
  explicit Reader(std::map<std::string, RawValue> values) : values_(std::move(values)) {}

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string str(const std::string& key, std::string fallback) {
    auto it = take(key);
    if (!it) return fallback;
    if (!it->quoted) throw ScenarioError(key, it->line, "expected a quoted string");
    return it->text;
  }

  double num(const std::string& key, double fallback) {
    auto it = take(key);
    if (!it) return fallback;
    double v = 0.0;
    const char* first = it->text.data();
    const char* last = first + it->text.size();
    auto res = std::from_chars(first, last, v);
    if (it->quoted || res.ec != std::errc() || res.ptr != last || !std::isfinite(v))
      throw ScenarioError(key, it->line, "expected a finite number, got '" + it->text + "'");
    return v;
  }

  std::uint64_t uint(const std::string& key, std::uint64_t fallback) {
    auto it = take(key);
    if (!it) return fallback;
    std::uint64_t v = 0;
    const char* first = it->text.data();
    const char* last = first + it->text.size();
    auto res = std::from_chars(first, last, v);
    if (it->quoted || res.ec != std::errc() || res.ptr != last)
      throw ScenarioError(key, it->line,
                          "expected a non-negative integer, got '" + it->text + "'");
    return v;
  }

  std::uint32_t uint32(const std::string& key, std::uint32_t fallback) {
    const std::size_t line = has(key) ? values_.at(key).line : 0;
    const std::uint64_t v = uint(key, fallback);
    if (v > 0xFFFFFFFFULL) throw ScenarioError(key, line, "value out of range");
    return static_cast<std::uint32_t>(v);
  }

  bool boolean(const std::string& key, bool fallback) {
    auto it = take(key);
    if (!it) return fallback;
    if (!it->quoted && it->text == "true") return true;
    if (!it->quoted && it->text == "false") return false;
    throw ScenarioError(key, it->line, "expected true or false");
  }

  std::size_t line_of(const std::string& key) const {
    auto it = values_.find(key);
    return it == values_.end() ? 0 : it->second.line;
  }

  void reject_leftovers() const {
    for (const auto& [key, value] : values_)
      if (!used_.count(key)) throw ScenarioError(key, value.line, "unknown key");
  }

 private:
  const RawValue* take(const std::string& key) {
    auto it = values_.find(key);
    if (it == values_.end()) return nullptr;
    used_[key] = true;
    return &it->second;
  }

  std::map<std::string, RawValue> values_;
  std::map<std::string, bool> used_;
};

const std::map<std::string, std::vector<std::string>>& known_sections() {
  static const std::map<std::string, std::vector<std::string>> sections = {
      {"scenario",
       {"name", "seed", "duration_ticks", "tick_dt_s", "spectral_efficiency", "contention_mode"}},
      {"pool", {"b_avail_hz", "l_threshold", "sensitivity_k"}},
      {"traffic", {"packet_size", "packet_bits", "packet_bits_min", "packet_bits_max"}},
      {"energy", {"p_sleep_w", "p_base_w", "k_dyn_w_per_hz"}},
      {"forecast", {"alpha", "horizon", "window"}},
      {"loadbal", {"transfer_frac", "idle_frac"}},
      {"sleep", {"idle_ticks_to_sleep"}},
      {"pf", {"t_pf"}},
      {"replay", {"bits_per_tag_event"}},
  };
  return sections;
}

const std::vector<std::string>& group_keys() {
  static const std::vector<std::string> keys = {"count",    "arrival_pps", "vip_tags",
                                                "std_tags", "start_tick",  "stop_tick"};
  return keys;
}

}  // namespace

void validate(const Scenario& s) {
  require(!s.name.empty(), "scenario.name", "must not be empty");
  require(s.duration_ticks >= 1, "scenario.duration_ticks", "must be >= 1");
  require(finite_positive(s.tick_dt_s), "scenario.tick_dt_s", "must be > 0");
  require(finite_positive(s.spectral_efficiency), "scenario.spectral_efficiency", "must be > 0");
  require(finite_positive(s.pool.b_avail_hz), "pool.b_avail_hz", "must be > 0");
  require(finite_nonneg(s.pool.l_threshold), "pool.l_threshold", "must be >= 0");
  require(finite_positive(s.pool.sensitivity_k), "pool.sensitivity_k", "must be > 0");
  if (s.traffic.size_model == PacketSizeModel::fixed) {
    require(s.traffic.packet_bits > 0, "traffic.packet_bits", "must be > 0");
  } else {
    require(s.traffic.packet_bits_min > 0, "traffic.packet_bits_min", "must be > 0");
    require(s.traffic.packet_bits_max >= s.traffic.packet_bits_min, "traffic.packet_bits_max",
            "must be >= packet_bits_min");
  }
  require(finite_nonneg(s.power.p_sleep_w), "energy.p_sleep_w", "must be >= 0");
  require(std::isfinite(s.power.p_base_w) && s.power.p_base_w > s.power.p_sleep_w,
          "energy.p_base_w", "must exceed p_sleep_w");
  require(finite_nonneg(s.power.k_dyn_w_per_hz), "energy.k_dyn_w_per_hz", "must be >= 0");
  require(std::isfinite(s.forecast.alpha) && s.forecast.alpha > 0.0 && s.forecast.alpha <= 1.0,
          "forecast.alpha", "must be in (0,1]");
  require(s.forecast.window >= 1, "forecast.window", "must be >= 1");
  require(std::isfinite(s.loadbal.transfer_frac) && s.loadbal.transfer_frac > 0.0 &&
              s.loadbal.transfer_frac <= 1.0,
          "loadbal.transfer_frac", "must be in (0,1]");
  require(std::isfinite(s.loadbal.idle_frac) && s.loadbal.idle_frac > 0.0 &&
              s.loadbal.idle_frac < 1.0,
          "loadbal.idle_frac", "must be in (0,1)");
  require(s.idle_ticks_to_sleep >= 1, "sleep.idle_ticks_to_sleep", "must be >= 1");
  require(s.t_pf >= 1, "pf.t_pf", "must be >= 1");
  require(finite_positive(s.bits_per_tag_event), "replay.bits_per_tag_event", "must be > 0");
  require(!s.nodes.empty(), "nodes", "at least one [nodes.<group>] section is required");
  std::unordered_set<std::string_view> seen;
  seen.reserve(s.nodes.size());
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    const NodeSpec& n = s.nodes[i];
    const std::string prefix = "nodes." + n.group;
    require(validate_node_id(n.node_id), prefix, "invalid node id '" + n.node_id + "'");
    require(finite_nonneg(n.arrival_pps), prefix + ".arrival_pps", "must be >= 0");
    if (n.stop_tick)
      require(*n.stop_tick >= n.start_tick, prefix + ".stop_tick", "must be >= start_tick");
    require(seen.insert(n.node_id).second, prefix, "duplicate node id " + n.node_id);
  }
}

Scenario parse_scenario(std::string_view text) {
  std::map<std::string, RawValue> values;
  std::vector<std::pair<std::string, std::size_t>> groups;  // in file order
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view raw = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    // Strip comments outside quotes.
    std::string line;
    bool in_quotes = false;
    for (char c : raw) {
      if (c == '"') in_quotes = !in_quotes;
      if (c == '#' && !in_quotes) break;
      line += c;
    }
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ScenarioError("section", line_no, "unterminated header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (section.rfind("nodes.", 0) == 0) {
        const std::string group = section.substr(6);
        if (!validate_node_id(group))
          throw ScenarioError(section, line_no, "invalid group name");
        for (const auto& g : groups)
          if (g.first == group) throw ScenarioError(section, line_no, "duplicate group");
        groups.emplace_back(group, line_no);
      } else if (!known_sections().count(section)) {
        throw ScenarioError(section, line_no, "unknown section");
      }
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ScenarioError(section, line_no, "expected key = value");
    if (section.empty()) throw ScenarioError("section", line_no, "key outside any section");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    const std::string field = section + "." + key;
    if (key.empty()) throw ScenarioError(field, line_no, "empty key");
    if (value.empty()) throw ScenarioError(field, line_no, "missing value");
    RawValue rv{value, line_no, false};
    if (value.front() == '"') {
      if (value.size() < 2 || value.back() != '"')
        throw ScenarioError(field, line_no, "unterminated string");
      rv.text = value.substr(1, value.size() - 2);
      rv.quoted = true;
    }
    if (!values.emplace(field, rv).second)
      throw ScenarioError(field, line_no, "duplicate key");
  }

  Reader r(values);
  Scenario s;
  s.name = r.str("scenario.name", s.name);
  s.seed = r.uint("scenario.seed", s.seed);
  s.duration_ticks = r.uint("scenario.duration_ticks", s.duration_ticks);
  s.tick_dt_s = r.num("scenario.tick_dt_s", s.tick_dt_s);
  s.spectral_efficiency = r.num("scenario.spectral_efficiency", s.spectral_efficiency);
  s.contention_mode = r.boolean("scenario.contention_mode", s.contention_mode);
  s.pool.b_avail_hz = r.num("pool.b_avail_hz", s.pool.b_avail_hz);
  s.pool.l_threshold = r.num("pool.l_threshold", s.pool.l_threshold);
  s.pool.sensitivity_k = r.num("pool.sensitivity_k", s.pool.sensitivity_k);

  const std::string size_model = r.str("traffic.packet_size", "fixed");
  if (size_model == "fixed") {
    s.traffic.size_model = PacketSizeModel::fixed;
  } else if (size_model == "uniform") {
    s.traffic.size_model = PacketSizeModel::uniform;
  } else {
    throw ScenarioError("traffic.packet_size", r.line_of("traffic.packet_size"),
                        "expected \"fixed\" or \"uniform\"");
  }
  s.traffic.packet_bits = r.uint32("traffic.packet_bits", s.traffic.packet_bits);
  s.traffic.packet_bits_min = r.uint32("traffic.packet_bits_min", s.traffic.packet_bits);
  s.traffic.packet_bits_max = r.uint32("traffic.packet_bits_max", s.traffic.packet_bits);
  if (s.traffic.size_model == PacketSizeModel::fixed) {
    if (r.has("traffic.packet_bits_min") || r.has("traffic.packet_bits_max"))
      throw ScenarioError("traffic.packet_bits_min", r.line_of("traffic.packet_bits_min"),
                          "only valid with packet_size = \"uniform\"");
    s.traffic.packet_bits_min = s.traffic.packet_bits_max = s.traffic.packet_bits;
  }

  s.power.p_sleep_w = r.num("energy.p_sleep_w", s.power.p_sleep_w);
  s.power.p_base_w = r.num("energy.p_base_w", s.power.p_base_w);
  s.power.k_dyn_w_per_hz = r.num("energy.k_dyn_w_per_hz", s.power.k_dyn_w_per_hz);
  s.forecast.alpha = r.num("forecast.alpha", s.forecast.alpha);
  s.forecast.horizon = r.uint32("forecast.horizon", s.forecast.horizon);
  s.forecast.window = r.uint("forecast.window", s.forecast.window);
  s.loadbal.transfer_frac = r.num("loadbal.transfer_frac", s.loadbal.transfer_frac);
  s.loadbal.idle_frac = r.num("loadbal.idle_frac", s.loadbal.idle_frac);
  s.idle_ticks_to_sleep = r.uint32("sleep.idle_ticks_to_sleep", s.idle_ticks_to_sleep);
  s.t_pf = r.uint32("pf.t_pf", s.t_pf);
  s.bits_per_tag_event = r.num("replay.bits_per_tag_event", s.bits_per_tag_event);

  for (const auto& [group, header_line] : groups) {
    const std::string p = "nodes." + group + ".";
    for (const auto& [key, value] : values) {
      if (key.rfind(p, 0) != 0) continue;
      const std::string leaf = key.substr(p.size());
      bool known = false;
      for (const auto& k : group_keys()) known = known || k == leaf;
      if (!known) throw ScenarioError(key, value.line, "unknown key");
    }
    if (!r.has(p + "count")) throw ScenarioError(p + "count", header_line, "missing");
    const std::uint64_t count = r.uint(p + "count", 0);
    if (count < 1 || count > 100000) throw ScenarioError(p + "count", r.line_of(p + "count"), "must be in [1, 100000]");
    NodeSpec spec;
    spec.group = group;
    spec.arrival_pps = r.num(p + "arrival_pps", 0.0);
    spec.mix.vip = r.uint32(p + "vip_tags", 0);
    spec.mix.standard = r.uint32(p + "std_tags", 0);
    spec.start_tick = r.uint(p + "start_tick", 0);
    if (r.has(p + "stop_tick")) spec.stop_tick = r.uint(p + "stop_tick", 0);
    for (std::uint64_t i = 0; i < count; ++i) {
      spec.node_id = "N" + std::to_string(s.nodes.size());
      s.nodes.push_back(spec);
    }
  }
  r.reject_leftovers();

  try {
    validate(s);
  } catch (const ScenarioError& e) {
    // Point at the offending line when the field came from the file.
    std::size_t line = r.line_of(e.field());
    if (!line) {
      for (const auto& [group, header_line] : groups)
        if (e.field().rfind("nodes." + group, 0) == 0) line = header_line;
    }
    std::string what = e.what();
    const std::string prefix = e.field() + ": ";
    if (what.rfind(prefix, 0) == 0) what = what.substr(prefix.size());
    throw ScenarioError(e.field(), line, what);
  }
  return s;
}

std::string to_text(const Scenario& s) {
  std::ostringstream out;
  out << "[scenario]\n"
      << "name = \"" << s.name << "\"\n"
      << "seed = " << s.seed << "\n"
      << "duration_ticks = " << s.duration_ticks << "\n"
      << "tick_dt_s = " << fmt_double(s.tick_dt_s) << "\n"
      << "spectral_efficiency = " << fmt_double(s.spectral_efficiency) << "\n"
      << "contention_mode = " << (s.contention_mode ? "true" : "false") << "\n\n"
      << "[pool]\n"
      << "b_avail_hz = " << fmt_double(s.pool.b_avail_hz) << "\n"
      << "l_threshold = " << fmt_double(s.pool.l_threshold) << "\n"
      << "sensitivity_k = " << fmt_double(s.pool.sensitivity_k) << "\n\n"
      << "[traffic]\n";
  if (s.traffic.size_model == PacketSizeModel::fixed) {
    out << "packet_size = \"fixed\"\n"
        << "packet_bits = " << s.traffic.packet_bits << "\n\n";
  } else {
    out << "packet_size = \"uniform\"\n"
        << "packet_bits = " << s.traffic.packet_bits << "\n"
        << "packet_bits_min = " << s.traffic.packet_bits_min << "\n"
        << "packet_bits_max = " << s.traffic.packet_bits_max << "\n\n";
  }
  out << "[energy]\n"
      << "p_sleep_w = " << fmt_double(s.power.p_sleep_w) << "\n"
      << "p_base_w = " << fmt_double(s.power.p_base_w) << "\n"
      << "k_dyn_w_per_hz = " << fmt_double(s.power.k_dyn_w_per_hz) << "\n\n"
      << "[forecast]\n"
      << "alpha = " << fmt_double(s.forecast.alpha) << "\n"
      << "horizon = " << s.forecast.horizon << "\n"
      << "window = " << s.forecast.window << "\n\n"
      << "[loadbal]\n"
      << "transfer_frac = " << fmt_double(s.loadbal.transfer_frac) << "\n"
      << "idle_frac = " << fmt_double(s.loadbal.idle_frac) << "\n\n"
      << "[sleep]\n"
      << "idle_ticks_to_sleep = " << s.idle_ticks_to_sleep << "\n\n"
      << "[pf]\n"
      << "t_pf = " << s.t_pf << "\n\n"
      << "[replay]\n"
      << "bits_per_tag_event = " << fmt_double(s.bits_per_tag_event) << "\n";

  std::size_t i = 0;
  while (i < s.nodes.size()) {
    std::size_t j = i + 1;
    while (j < s.nodes.size() && s.nodes[j].group == s.nodes[i].group) ++j;
    const NodeSpec& n = s.nodes[i];
    out << "\n[nodes." << n.group << "]\n"
        << "count = " << (j - i) << "\n"
        << "arrival_pps = " << fmt_double(n.arrival_pps) << "\n"
        << "vip_tags = " << n.mix.vip << "\n"
        << "std_tags = " << n.mix.standard << "\n"
        << "start_tick = " << n.start_tick << "\n";
    if (n.stop_tick) out << "stop_tick = " << *n.stop_tick << "\n";
    i = j;
  }
  return out.str();
}

std::string digest(const Scenario& scenario) {
  // The seed is reported separately, so seed sweeps share a digest.
  Scenario unseeded = scenario;
  unseeded.seed = 0;
  const std::string text = to_text(unseeded);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  static constexpr char kHex[] = "0123456789abcdef";
  for (int k = 15; k >= 0; --k) {
    buf[k] = kHex[h & 0xF];
    h >>= 4;
  }
  buf[16] = '\0';
  return buf;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::system_error(errno ? errno : ENOENT, std::generic_category(), path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw std::system_error(EIO, std::generic_category(), path);
  return parse_scenario(buf.str());
}

}  // namespace rfidnet
