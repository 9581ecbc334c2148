#include "rfidnet/energy.hpp"

#include <cmath>

#include "rfidnet/loadbal.hpp"

namespace rfidnet {

void check_power(const PowerParams& params) {
  if (!(params.p_sleep_w >= 0.0) || !(params.p_sleep_w < params.p_base_w))
    throw DomainError("power: need 0 <= p_sleep_w < p_base_w");
  if (!(params.k_dyn_w_per_hz >= 0.0) || !std::isfinite(params.k_dyn_w_per_hz))
    throw DomainError("power: k_dyn_w_per_hz must be >= 0");
}

double node_power(const NodeState& node, const PowerParams& params) noexcept {
  if (!node.active()) return params.p_sleep_w;
  return params.p_base_w + params.k_dyn_w_per_hz * node.allocated_bw_hz;
}

SleepDecision update_sleep(const NodeState& node, const SleepPolicy& policy, const Pool& pool,
                           std::uint32_t idle_streak) noexcept {
  if (node.demand_bits > 0.0) return {PowerMode::active, 0};
  if (classify_load(node, pool, policy.idle_frac) != LoadClass::idle) return {PowerMode::active, 0};
  const std::uint32_t streak = idle_streak + 1;
  return {streak >= policy.idle_ticks_to_sleep ? PowerMode::sleep : PowerMode::active, streak};
}

double accumulate_energy(std::span<const std::vector<double>> trace, double tick_dt_s) {
  if (!(tick_dt_s > 0.0)) throw DomainError("accumulate_energy: tick_dt_s must be > 0");
  double joules = 0.0;
  for (const auto& tick : trace)
    for (double w : tick) joules += w * tick_dt_s;
  return joules;
}

}  // namespace rfidnet
