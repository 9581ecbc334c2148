#pragma once

// Line protocol between tag readers and the controller.
//
//   TAG <tag_id> <node_id> <VIP|STD> <timestamp_ms>
//   ALLOC <node_id> <final_hz>          final_hz printed with 3 decimals
//   STATUS <bw_pct> <load_pct>          integers 0..100
//   <tag_id>                            legacy form: node N0, STD, t=0
//
// One message per LF-terminated line, single spaces, at most 512 bytes.

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <istream>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "rfidnet/domain.hpp"

namespace rfidnet::wire {

inline constexpr std::size_t kMaxLineBytes = 512;
inline constexpr std::string_view kLegacyNode = "N0";

using TagMsg = TagEvent;

struct AllocMsg {
  std::string node_id;
  double final_hz = 0.0;

  friend bool operator==(const AllocMsg&, const AllocMsg&) = default;
};

struct StatusMsg {
  int bandwidth_optimized_pct = 0;
  int load_reduced_pct = 0;

  friend bool operator==(const StatusMsg&, const StatusMsg&) = default;
};

using Message = std::variant<TagMsg, AllocMsg, StatusMsg>;

/// Malformed line. `field` names the grammar element, `offset` is the byte
/// offset into the line where the problem starts.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string field, std::size_t offset, const std::string& what);
  const std::string& field() const noexcept { return field_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::string field_;
  std::size_t offset_;
};

/// Well-formed line carrying an invalid id or out-of-range value.
class ValidationError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Out-of-order or otherwise unusable feed; `line` is 1-based.
class FeedError : public std::runtime_error {
 public:
  FeedError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Accepts a line with or without its trailing LF.
Message parse_line(std::string_view line);

/// Canonical form including the trailing LF. Throws ValidationError for a
/// message that could not be parsed back.
std::string serialize(const Message& msg);

struct StatusView {
  StatusMsg msg;
  std::string bandwidth_text;  // "Bandwidth Optimized: <p>%"
  std::string load_text;       // "Load Reduced: <q>%"
};

/// Rounds half up and clamps to [0,100].
int percent(double fraction) noexcept;

/// bandwidth_optimized = total_final_hz / b_avail_hz; load_reduced is the
/// relative drop of mean overloaded excess (0 when there was none).
StatusView format_status(double total_final_hz, double b_avail_hz, double excess_before,
                         double excess_after);
StatusView format_status(const StatusMsg& msg);

/// Source of tag events in feed order.
class FeedSource {
 public:
  virtual ~FeedSource() = default;
  /// Next event, nullopt at a clean end. Throws FeedError / ParseError /
  /// TransportError.
  virtual std::optional<TagMsg> next() = 0;
  /// Position of the last event returned (line number, or datagram count).
  virtual std::size_t position() const noexcept = 0;
};

/// Reads LF-delimited lines; blank lines are skipped. Enforces
/// non-decreasing timestamps and rejects non-TAG verbs.
class StreamFeed : public FeedSource {
 public:
  explicit StreamFeed(std::istream& in) : in_(in) {}
  std::optional<TagMsg> next() override;
  std::size_t line() const noexcept { return line_; }
  std::size_t position() const noexcept override { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
  std::optional<std::uint64_t> last_ts_;
};

class FileFeed : public FeedSource {
 public:
  /// Throws TransportError when the file cannot be opened.
  explicit FileFeed(const std::string& path);
  ~FileFeed() override;
  std::optional<TagMsg> next() override;
  std::size_t position() const noexcept override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Blocking bounded FIFO between a feed thread and the engine. push blocks
/// while full; pop blocks while empty and returns nullopt once closed and
/// drained.
template <typename T>
class BoundedQueue {
 public:
  explicit BoundedQueue(std::size_t capacity) : capacity_(capacity ? capacity : 1) {}

  /// Returns false when the queue was closed.
  bool push(T value) {
    std::unique_lock lock(mu_);
    not_full_.wait(lock, [&] { return closed_ || items_.size() < capacity_; });
    if (closed_) return false;
    items_.push_back(std::move(value));
    not_empty_.notify_one();
    return true;
  }

  std::optional<T> pop() {
    std::unique_lock lock(mu_);
    not_empty_.wait(lock, [&] { return closed_ || !items_.empty(); });
    if (items_.empty()) return std::nullopt;
    T value = std::move(items_.front());
    items_.pop_front();
    not_full_.notify_one();
    return value;
  }

  void close() {
    std::lock_guard lock(mu_);
    closed_ = true;
    not_empty_.notify_all();
    not_full_.notify_all();
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return items_.size();
  }

 private:
  const std::size_t capacity_;
  mutable std::mutex mu_;
  std::condition_variable not_empty_;
  std::condition_variable not_full_;
  std::deque<T> items_;
  bool closed_ = false;
};

/// Replays every event of a source into a vector (file replay helper).
std::vector<TagMsg> replay_feed(FeedSource& source);

}  // namespace rfidnet::wire
