#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rfidnet/domain.hpp"

namespace rfidnet {

/// Affine power model: a sleeping node draws p_sleep_w, an active one
/// p_base_w plus k_dyn_w_per_hz for every allocated Hz.
struct PowerParams {
  double p_sleep_w = 2.0;
  double p_base_w = 10.0;
  double k_dyn_w_per_hz = 1e-6;
};

void check_power(const PowerParams& params);

struct SleepPolicy {
  double idle_frac = 0.25;
  std::uint32_t idle_ticks_to_sleep = 5;
  bool wake_on_demand = true;
};

struct SleepDecision {
  PowerMode mode = PowerMode::active;
  std::uint32_t idle_streak = 0;

  friend bool operator==(const SleepDecision&, const SleepDecision&) = default;
};

double node_power(const NodeState& node, const PowerParams& params) noexcept;

/// Advances a node's idle streak. Demand always wakes the node (zero wake
/// latency); IDLE ticks with no demand count toward sleep.
SleepDecision update_sleep(const NodeState& node, const SleepPolicy& policy, const Pool& pool,
                           std::uint32_t idle_streak) noexcept;

/// `trace[t]` holds the per-node watts of tick t. Returns joules.
double accumulate_energy(std::span<const std::vector<double>> trace, double tick_dt_s);

}  // namespace rfidnet
