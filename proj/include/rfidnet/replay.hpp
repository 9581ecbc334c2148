#pragma once

#include <functional>
#include <vector>

#include "rfidnet/engine.hpp"
#include "rfidnet/wire.hpp"

namespace rfidnet {

/// Called once per tick that saw tag events: one ALLOC per touched node in
/// scenario order, then the STATUS for that tick.
using ReplaySink = std::function<void(const std::vector<wire::AllocMsg>&, const wire::StatusMsg&)>;

struct ReplayResult {
  MetricsReport report;
  std::uint64_t events = 0;
};

/// Drives the engine from a tag feed instead of the scenario's arrival
/// rates. An event at t ms lands in tick floor(t / (dt * 1000)), bumps the
/// node's priority mix and queues one packet of bits_per_tag_event bits.
/// Runs max(duration_ticks, last event tick + 1) ticks. An event naming a
/// node the scenario does not define raises FeedError at the feed position.
ReplayResult replay(wire::FeedSource& feed, const Scenario& scenario, Policy policy,
                    const ReplaySink& sink = {}, const EngineOptions& opts = {});

}  // namespace rfidnet
