#include "rfidnet/wire.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <vector>

namespace rfidnet::wire {

ParseError::ParseError(std::string field, std::size_t offset, const std::string& what)
    : std::runtime_error(field + " at byte " + std::to_string(offset) + ": " + what),
      field_(std::move(field)),
      offset_(offset) {}

FeedError::FeedError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

struct Token {
  std::string_view text;
  std::size_t offset;
};

std::vector<Token> split_fields(std::string_view line) {
  std::vector<Token> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t sp = line.find(' ', start);
    const std::size_t end = sp == std::string_view::npos ? line.size() : sp;
    if (end == start)
      throw ParseError("separator", start, "expected exactly one space between fields");
    out.push_back(Token{line.substr(start, end - start), start});
    if (sp == std::string_view::npos) break;
    start = sp + 1;
  }
  return out;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

std::uint64_t parse_uint(const Token& tok, const char* field) {
  if (!all_digits(tok.text)) throw ParseError(field, tok.offset, "expected decimal digits");
  if (tok.text.size() > 1 && tok.text.front() == '0')
    throw ParseError(field, tok.offset, "leading zero");
  std::uint64_t v = 0;
  auto res = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), v);
  if (res.ec != std::errc()) throw ParseError(field, tok.offset, "value out of range");
  return v;
}

int parse_pct(const Token& tok, const char* field) {
  const std::uint64_t v = parse_uint(tok, field);
  if (v > 100) throw ValidationError(field, tok.offset, "percentage above 100");
  return static_cast<int>(v);
}

double parse_hz(const Token& tok) {
  const std::string_view s = tok.text;
  const std::size_t dot = s.find('.');
  const std::string_view whole = s.substr(0, dot);
  if (!all_digits(whole)) throw ParseError("final_hz", tok.offset, "expected a decimal number");
  if (whole.size() > 1 && whole.front() == '0')
    throw ParseError("final_hz", tok.offset, "leading zero");
  if (dot != std::string_view::npos && !all_digits(s.substr(dot + 1)))
    throw ParseError("final_hz", tok.offset + dot, "expected digits after '.'");
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v, std::chars_format::fixed);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
    throw ValidationError("final_hz", tok.offset, "value out of range");
  return v;
}

void expect_fields(const std::vector<Token>& toks, std::size_t want,
                   std::initializer_list<const char*> names, std::size_t line_size) {
  if (toks.size() < want) {
    const char* missing = *(names.begin() + (toks.size() - 1));
    throw ParseError(missing, line_size, "missing field");
  }
  if (toks.size() > want)
    throw ParseError("line", toks[want].offset, "unexpected trailing field");
}

}  // namespace

Message parse_line(std::string_view line) {
  if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
  if (line.size() > kMaxLineBytes)
    throw ParseError("line", kMaxLineBytes, "line longer than 512 bytes");
  if (line.empty()) throw ParseError("verb", 0, "empty line");
  for (std::size_t i = 0; i < line.size(); ++i) {
    const auto c = static_cast<unsigned char>(line[i]);
    if (c < 0x20 || c > 0x7E) throw ParseError("line", i, "unexpected byte");
  }

  const std::vector<Token> toks = split_fields(line);
  const std::string_view verb = toks.front().text;

  if (verb == "TAG") {
    expect_fields(toks, 5, {"tag_id", "node_id", "priority", "timestamp_ms"}, line.size());
    if (!validate_tag_id(toks[1].text))
      throw ValidationError("tag_id", toks[1].offset, "tag id must be 1-32 of [A-Za-z0-9]");
    if (!validate_node_id(toks[2].text))
      throw ValidationError("node_id", toks[2].offset, "invalid node id");
    PriorityClass prio;
    if (toks[3].text == "VIP") {
      prio = PriorityClass::vip;
    } else if (toks[3].text == "STD") {
      prio = PriorityClass::standard;
    } else {
      throw ParseError("priority", toks[3].offset, "expected VIP or STD");
    }
    const std::uint64_t ts = parse_uint(toks[4], "timestamp_ms");
    return TagMsg{std::string(toks[1].text), std::string(toks[2].text), prio, ts};
  }
  if (verb == "ALLOC") {
    expect_fields(toks, 3, {"node_id", "final_hz"}, line.size());
    if (!validate_node_id(toks[1].text))
      throw ValidationError("node_id", toks[1].offset, "invalid node id");
    // Parse before building the aggregate: a throw mid-initializer leaks on some compilers.
    const double hz = parse_hz(toks[2]);
    return AllocMsg{std::string(toks[1].text), hz};
  }
  if (verb == "STATUS") {
    expect_fields(toks, 3, {"bw_pct", "load_pct"}, line.size());
    return StatusMsg{parse_pct(toks[1], "bw_pct"), parse_pct(toks[2], "load_pct")};
  }
  if (toks.size() == 1) {
    if (!validate_tag_id(verb))
      throw ValidationError("tag_id", 0, "tag id must be 1-32 of [A-Za-z0-9]");
    return TagMsg{std::string(verb), std::string(kLegacyNode), PriorityClass::standard, 0};
  }
  throw ParseError("verb", 0, "unknown verb '" + std::string(verb) + "'");
}

std::string serialize(const Message& msg) {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, TagMsg>) {
          if (!validate_tag_id(m.tag_id)) throw ValidationError("tag_id", 0, "invalid tag id");
          if (!validate_node_id(m.node_id)) throw ValidationError("node_id", 0, "invalid node id");
          return "TAG " + m.tag_id + " " + m.node_id + " " + std::string(to_string(m.priority)) +
                 " " + std::to_string(m.timestamp_ms) + "\n";
        } else if constexpr (std::is_same_v<T, AllocMsg>) {
          if (!validate_node_id(m.node_id)) throw ValidationError("node_id", 0, "invalid node id");
          if (!std::isfinite(m.final_hz) || m.final_hz < 0.0)
            throw ValidationError("final_hz", 0, "must be finite and >= 0");
          char buf[64];
          auto res = std::to_chars(buf, buf + sizeof buf, m.final_hz, std::chars_format::fixed, 3);
          return "ALLOC " + m.node_id + " " + std::string(buf, res.ptr) + "\n";
        } else {
          if (m.bandwidth_optimized_pct < 0 || m.bandwidth_optimized_pct > 100 ||
              m.load_reduced_pct < 0 || m.load_reduced_pct > 100)
            throw ValidationError("status", 0, "percentages must be in [0,100]");
          return "STATUS " + std::to_string(m.bandwidth_optimized_pct) + " " +
                 std::to_string(m.load_reduced_pct) + "\n";
        }
      },
      msg);
}

int percent(double fraction) noexcept {
  if (!(fraction > 0.0)) return 0;  // also catches NaN
  const double scaled = std::floor(fraction * 100.0 + 0.5);
  return scaled >= 100.0 ? 100 : static_cast<int>(scaled);
}

StatusView format_status(const StatusMsg& msg) {
  return StatusView{msg, "Bandwidth Optimized: " + std::to_string(msg.bandwidth_optimized_pct) + "%",
                    "Load Reduced: " + std::to_string(msg.load_reduced_pct) + "%"};
}

StatusView format_status(double total_final_hz, double b_avail_hz, double excess_before,
                         double excess_after) {
  StatusMsg msg;
  msg.bandwidth_optimized_pct = b_avail_hz > 0.0 ? percent(total_final_hz / b_avail_hz) : 0;
  msg.load_reduced_pct =
      excess_before > 0.0 ? percent((excess_before - excess_after) / excess_before) : 0;
  return format_status(msg);
}

std::optional<TagMsg> StreamFeed::next() {
  std::string text;
  while (std::getline(in_, text)) {
    ++line_;
    if (text.empty()) continue;
    Message msg;
    try {
      msg = parse_line(text);
    } catch (const ParseError& e) {
      throw FeedError(line_, e.what());
    }
    auto* tag = std::get_if<TagMsg>(&msg);
    if (!tag) throw FeedError(line_, "expected a TAG message");
    if (last_ts_ && tag->timestamp_ms < *last_ts_)
      throw FeedError(line_, "timestamp " + std::to_string(tag->timestamp_ms) +
                                 " is earlier than " + std::to_string(*last_ts_));
    last_ts_ = tag->timestamp_ms;
    return std::move(*tag);
  }
  if (in_.bad()) throw TransportError("read failure after line " + std::to_string(line_));
  return std::nullopt;
}

struct FileFeed::Impl {
  std::ifstream file;
  StreamFeed feed;
  explicit Impl(const std::string& path) : file(path, std::ios::binary), feed(file) {}
};

FileFeed::FileFeed(const std::string& path) : impl_(std::make_unique<Impl>(path)) {
  if (!impl_->file) throw TransportError("cannot open feed " + path);
}

FileFeed::~FileFeed() = default;

std::optional<TagMsg> FileFeed::next() { return impl_->feed.next(); }

std::size_t FileFeed::position() const noexcept { return impl_->feed.position(); }

std::vector<TagMsg> replay_feed(FeedSource& source) {
  std::vector<TagMsg> out;
  while (auto msg = source.next()) out.push_back(std::move(*msg));
  return out;
}

}  // namespace rfidnet::wire
