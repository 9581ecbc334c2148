#include "rfidnet/replay.hpp"

#include <cmath>
#include <optional>

namespace rfidnet {

namespace {

struct PendingTag {
  wire::TagMsg msg;
  std::size_t node = 0;
  std::uint64_t tick = 0;
};

}  // namespace

ReplayResult replay(wire::FeedSource& feed, const Scenario& scenario, Policy policy,
                    const ReplaySink& sink, const EngineOptions& opts) {
  SimState state = initial_state(scenario);
  const double tick_ms = scenario.tick_dt_s * 1000.0;
  const auto bits = static_cast<std::uint32_t>(std::llround(scenario.bits_per_tag_event));
  if (bits == 0) throw DomainError("replay: bits_per_tag_event rounds to 0");

  auto pull = [&]() -> std::optional<PendingTag> {
    auto msg = feed.next();
    if (!msg) return std::nullopt;
    const auto idx = scenario.node_index(msg->node_id);
    if (!idx) throw wire::FeedError(feed.position(), "unknown node '" + msg->node_id + "'");
    const auto tick =
        static_cast<std::uint64_t>(std::floor(static_cast<double>(msg->timestamp_ms) / tick_ms));
    return PendingTag{std::move(*msg), *idx, tick};
  };

  ReplayResult result;
  std::optional<PendingTag> pending = pull();
  std::vector<std::uint8_t> touched(scenario.nodes.size());
  for (;;) {
    if (!pending && state.tick >= scenario.duration_ticks) break;

    std::fill(touched.begin(), touched.end(), std::uint8_t{0});
    bool any = false;
    std::vector<Packet> packets;
    while (pending && pending->tick <= state.tick) {
      NodeState& node = state.nodes[pending->node];
      if (pending->msg.priority == PriorityClass::vip)
        ++node.priority_mix.vip;
      else
        ++node.priority_mix.standard;
      packets.push_back(Packet{state.tick, bits, static_cast<std::uint32_t>(pending->node)});
      touched[pending->node] = 1;
      any = true;
      ++result.events;
      pending = pull();
    }
    ingest_packets(state, packets);
    advance(state, scenario, policy, opts);

    if (any && sink) {
      std::vector<wire::AllocMsg> allocs;
      for (std::size_t i = 0; i < touched.size(); ++i)
        if (touched[i]) allocs.push_back({state.nodes[i].node_id, state.nodes[i].allocated_bw_hz});
      const auto& st = state.last_status;
      const wire::StatusView view =
          wire::format_status(st.total_final_hz, scenario.pool.b_avail_hz,
                              st.overload_excess_before, st.overload_excess_after);
      sink(allocs, view.msg);
    }
  }
  result.report = summarize(state, scenario, policy);
  return result;
}

}  // namespace rfidnet
