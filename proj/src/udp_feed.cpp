#include "rfidnet/udp_feed.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstring>
#include <mutex>
#include <thread>
#include <vector>

namespace rfidnet::wire {

namespace {

struct Received {
  std::variant<TagMsg, FeedError> item;
  sockaddr_in from{};
};

bool same_peer(const sockaddr_in& a, const sockaddr_in& b) {
  return a.sin_addr.s_addr == b.sin_addr.s_addr && a.sin_port == b.sin_port;
}

}  // namespace

struct UdpFeed::Impl {
  int fd = -1;
  std::chrono::milliseconds idle;
  BoundedQueue<Received> queue;
  std::atomic<bool> stop{false};
  std::thread reader;

  std::mutex peers_mu;
  std::map<std::string, sockaddr_in> node_peer;
  std::vector<sockaddr_in> peers;

  std::size_t line = 0;
  std::optional<std::uint64_t> last_ts;

  Impl(std::size_t cap, std::chrono::milliseconds idle_timeout) : idle(idle_timeout), queue(cap) {}

  void read_loop() {
    std::vector<char> buf(65536);
    std::size_t lines = 0;
    while (!stop.load()) {
      pollfd pfd{fd, POLLIN, 0};
      const int ready = ::poll(&pfd, 1, static_cast<int>(idle.count()));
      if (ready < 0 && errno == EINTR) continue;
      if (ready <= 0) break;  // idle timeout or poll failure ends the feed
      sockaddr_in from{};
      socklen_t len = sizeof from;
      const ssize_t got = ::recvfrom(fd, buf.data(), buf.size(), 0,
                                     reinterpret_cast<sockaddr*>(&from), &len);
      if (got < 0) {
        if (errno == EINTR || errno == EAGAIN) continue;
        break;
      }
      std::string_view data(buf.data(), static_cast<std::size_t>(got));
      while (!data.empty()) {
        const std::size_t nl = data.find('\n');
        std::string_view text = data.substr(0, nl);
        data = nl == std::string_view::npos ? std::string_view{} : data.substr(nl + 1);
        if (text.empty()) continue;
        ++lines;
        Received r{TagMsg{}, from};
        try {
          Message msg = parse_line(text);
          if (auto* tag = std::get_if<TagMsg>(&msg))
            r.item = std::move(*tag);
          else
            r.item = FeedError(lines, "expected a TAG message");
        } catch (const ParseError& e) {
          r.item = FeedError(lines, e.what());
        }
        if (!queue.push(std::move(r))) return;
      }
    }
    queue.close();
  }
};

UdpFeed::UdpFeed(const Options& opts)
    : impl_(std::make_unique<Impl>(opts.queue_capacity, opts.idle_timeout)) {
  impl_->fd = ::socket(AF_INET, SOCK_DGRAM, 0);
  if (impl_->fd < 0) throw TransportError(std::string("socket: ") + std::strerror(errno));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(opts.port);
  if (::inet_pton(AF_INET, opts.bind_address.c_str(), &addr.sin_addr) != 1) {
    ::close(impl_->fd);
    throw TransportError("bad bind address " + opts.bind_address);
  }
  if (::bind(impl_->fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    const std::string err = std::strerror(errno);
    ::close(impl_->fd);
    throw TransportError("bind port " + std::to_string(opts.port) + ": " + err);
  }
  socklen_t len = sizeof addr;
  ::getsockname(impl_->fd, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  impl_->reader = std::thread([impl = impl_.get()] { impl->read_loop(); });
}

UdpFeed::~UdpFeed() {
  impl_->stop = true;
  impl_->queue.close();
  if (impl_->reader.joinable()) impl_->reader.join();
  ::close(impl_->fd);
}

std::optional<TagMsg> UdpFeed::next() {
  auto r = impl_->queue.pop();
  if (!r) return std::nullopt;
  position_ = ++impl_->line;
  if (auto* err = std::get_if<FeedError>(&r->item)) throw *err;
  TagMsg tag = std::move(std::get<TagMsg>(r->item));
  if (impl_->last_ts && tag.timestamp_ms < *impl_->last_ts)
    throw FeedError(position_, "timestamp " + std::to_string(tag.timestamp_ms) +
                                   " is earlier than " + std::to_string(*impl_->last_ts));
  impl_->last_ts = tag.timestamp_ms;
  {
    std::lock_guard lock(impl_->peers_mu);
    impl_->node_peer[tag.node_id] = r->from;
    bool known = false;
    for (const auto& p : impl_->peers) known = known || same_peer(p, r->from);
    if (!known) impl_->peers.push_back(r->from);
  }
  return tag;
}

void UdpFeed::respond(const std::vector<AllocMsg>& allocs, const StatusMsg& status) {
  auto send_to = [fd = impl_->fd](const sockaddr_in& to, const std::string& line) {
    ::sendto(fd, line.data(), line.size(), 0, reinterpret_cast<const sockaddr*>(&to), sizeof to);
  };
  std::lock_guard lock(impl_->peers_mu);
  for (const auto& a : allocs) {
    auto it = impl_->node_peer.find(a.node_id);
    if (it != impl_->node_peer.end()) send_to(it->second, serialize(a));
  }
  const std::string st = serialize(status);
  for (const auto& p : impl_->peers) send_to(p, st);
}

}  // namespace rfidnet::wire
