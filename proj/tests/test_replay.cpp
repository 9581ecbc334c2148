#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>
#include <sstream>
#include <thread>

#include "doctest.h"
#include "rfidnet/replay.hpp"
#include "rfidnet/udp_feed.hpp"

using namespace rfidnet;
using namespace rfidnet::wire;

namespace {

Scenario small(std::uint64_t ticks = 10) {
  Scenario s;
  s.name = "replay";
  s.duration_ticks = ticks;
  s.tick_dt_s = 0.01;
  s.pool = {10e6, 4.0, 0.5};
  for (int i = 0; i < 3; ++i) {
    NodeSpec spec;
    spec.node_id = "N" + std::to_string(i);
    spec.group = "g";
    spec.arrival_pps = 1e6;  // must be ignored by replay
    s.nodes.push_back(spec);
  }
  return s;
}

struct Capture {
  std::vector<std::vector<AllocMsg>> allocs;
  std::vector<StatusMsg> status;
  ReplaySink sink() {
    return [this](const std::vector<AllocMsg>& a, const StatusMsg& s) {
      allocs.push_back(a);
      status.push_back(s);
    };
  }
};

}  // namespace

TEST_CASE("legacy single tag produces one status line") {
  std::istringstream in("12345ABC\n");
  StreamFeed feed(in);
  Capture cap;
  const auto res = replay(feed, small(), Policy::rfid, cap.sink());
  CHECK(res.events == 1);
  REQUIRE(cap.status.size() == 1);
  REQUIRE(cap.allocs[0].size() == 1);
  CHECK(cap.allocs[0][0].node_id == "N0");
  CHECK(res.report.arrived_packets == 1);
  CHECK(res.report.delivered_packets == 1);
  CHECK(res.report.duration_ticks == 10);
}

TEST_CASE("empty feed equals a zero-traffic run") {
  std::istringstream in("");
  StreamFeed feed(in);
  Capture cap;
  const auto res = replay(feed, small(), Policy::rfid, cap.sink());
  CHECK(cap.status.empty());
  Scenario quiet = small();
  for (auto& n : quiet.nodes) n.arrival_pps = 0;
  auto expect = run(quiet, Policy::rfid);
  expect.scenario_digest = res.report.scenario_digest;  // arrival rates differ by design
  CHECK(res.report == expect);
}

TEST_CASE("events land in the right tick and extend the run") {
  std::istringstream in(
      "TAG A N2 VIP 0\nTAG B N1 STD 9\nTAG C N2 STD 10\nTAG D N0 STD 10\nTAG E N1 STD 250\n");
  StreamFeed feed(in);
  Capture cap;
  const auto res = replay(feed, small(5), Policy::rfid, cap.sink());
  CHECK(res.events == 5);
  CHECK(res.report.duration_ticks == 26);
  REQUIRE(cap.allocs.size() == 3);
  REQUIRE(cap.allocs[0].size() == 2);
  CHECK(cap.allocs[0][0].node_id == "N1");
  CHECK(cap.allocs[0][1].node_id == "N2");
  REQUIRE(cap.allocs[1].size() == 2);
  CHECK(cap.allocs[1][0].node_id == "N0");
  for (const auto& s : cap.status) {
    CHECK(s.bandwidth_optimized_pct >= 0);
    CHECK(s.bandwidth_optimized_pct <= 100);
  }
}

TEST_CASE("unknown nodes and malformed lines are feed errors with positions") {
  std::istringstream in("TAG A N0 STD 0\nTAG B N7 STD 1\n");
  StreamFeed feed(in);
  try {
    replay(feed, small(), Policy::rfid);
    FAIL("expected FeedError");
  } catch (const FeedError& e) {
    CHECK(e.line() == 2);
  }
  std::string text;
  for (int i = 0; i < 6; ++i) text += "TAG A N0 STD " + std::to_string(i) + "\n";
  text += "TAG A N0 STD\n";
  std::istringstream bad(text);
  StreamFeed feed2(bad);
  try {
    replay(feed2, small(), Policy::baseline4g);
    FAIL("expected FeedError");
  } catch (const FeedError& e) {
    CHECK(e.line() == 7);
  }
}

TEST_CASE("udp loopback feed answers each sender") {
  UdpFeed::Options opts;
  opts.idle_timeout = std::chrono::milliseconds(300);
  UdpFeed feed(opts);
  REQUIRE(feed.port() != 0);

  const int client = ::socket(AF_INET, SOCK_DGRAM, 0);
  REQUIRE(client >= 0);
  sockaddr_in to{};
  to.sin_family = AF_INET;
  to.sin_port = htons(feed.port());
  ::inet_pton(AF_INET, "127.0.0.1", &to.sin_addr);
  for (const char* line : {"TAG A1 N1 VIP 0\n", "TAG A2 N2 STD 30\n"})
    ::sendto(client, line, std::strlen(line), 0, reinterpret_cast<sockaddr*>(&to), sizeof to);

  const auto res = replay(feed, small(), Policy::rfid, [&](const auto& a, const auto& s) {
    feed.respond(a, s);
  });
  CHECK(res.events == 2);

  std::vector<std::string> got;
  char buf[600];
  for (;;) {
    pollfd pfd{client, POLLIN, 0};
    if (::poll(&pfd, 1, 200) <= 0) break;
    const auto n = ::recv(client, buf, sizeof buf, 0);
    if (n <= 0) break;
    got.emplace_back(buf, static_cast<std::size_t>(n));
  }
  ::close(client);
  REQUIRE(got.size() == 4);  // ALLOC + STATUS for each of the two ticks
  CHECK(got[0].rfind("ALLOC N1 ", 0) == 0);
  CHECK(got[1].rfind("STATUS ", 0) == 0);
  CHECK(got[2].rfind("ALLOC N2 ", 0) == 0);
  for (const auto& line : got) CHECK_NOTHROW(parse_line(line));
}

TEST_CASE("udp feed reports malformed datagrams") {
  UdpFeed::Options opts;
  opts.idle_timeout = std::chrono::milliseconds(300);
  UdpFeed feed(opts);
  const int client = ::socket(AF_INET, SOCK_DGRAM, 0);
  sockaddr_in to{};
  to.sin_family = AF_INET;
  to.sin_port = htons(feed.port());
  ::inet_pton(AF_INET, "127.0.0.1", &to.sin_addr);
  const std::string payload = "TAG A1 N1 VIP 0\nnot a tag line\n";
  ::sendto(client, payload.data(), payload.size(), 0, reinterpret_cast<sockaddr*>(&to), sizeof to);
  ::close(client);
  CHECK(feed.next().has_value());
  try {
    feed.next();
    FAIL("expected FeedError");
  } catch (const FeedError& e) {
    CHECK(e.line() == 2);
  }
}
