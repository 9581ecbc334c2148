#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>

#include "rfidnet/wire.hpp"

namespace rfidnet::wire {

/// Tag feed over UDP on IPv4 loopback or any interface. Each datagram holds
/// one or more LF-separated lines. A reader thread parses datagrams into a
/// bounded queue; the feed ends after `idle_timeout` without traffic.
class UdpFeed : public FeedSource {
 public:
  struct Options {
    std::string bind_address = "127.0.0.1";
    std::uint16_t port = 0;  // 0 picks an ephemeral port
    std::chrono::milliseconds idle_timeout{1000};
    std::size_t queue_capacity = 4096;
  };

  /// Throws TransportError when the socket cannot be bound.
  explicit UdpFeed(const Options& opts);
  ~UdpFeed() override;
  UdpFeed(const UdpFeed&) = delete;
  UdpFeed& operator=(const UdpFeed&) = delete;

  std::optional<TagMsg> next() override;
  /// Count of lines received so far.
  std::size_t position() const noexcept override { return position_; }

  std::uint16_t port() const noexcept { return port_; }

  /// Sends ALLOC to the last sender seen for that node and STATUS to every
  /// known sender. Unknown nodes are skipped.
  void respond(const std::vector<AllocMsg>& allocs, const StatusMsg& status);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::uint16_t port_ = 0;
  std::size_t position_ = 0;
};

}  // namespace rfidnet::wire
