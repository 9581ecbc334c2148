#include "rfidnet/allocator.hpp"

#include <cmath>
#include <unordered_set>
#include <vector>

namespace rfidnet {

double sigmoid_share(double l_current, double l_threshold, double sensitivity_k) {
  if (!std::isfinite(l_current) || !std::isfinite(l_threshold) || !std::isfinite(sensitivity_k))
    throw DomainError("sigmoid_share: non-finite input");
  if (sensitivity_k <= 0.0) throw DomainError("sigmoid_share: sensitivity_k must be > 0");
  return kernels::logistic(sensitivity_k * (l_current - l_threshold));
}

RawAllocation raw_allocation(const NodeState& node, const Pool& pool) {
  if (!node.active()) throw DomainError("raw_allocation: node " + node.node_id + " is asleep");
  const double frac = sigmoid_share(node.l_current, pool.l_threshold, pool.sensitivity_k);
  return RawAllocation{node.node_id, frac, frac * pool.b_avail_hz};
}

AllocationPlan allocate(std::span<const NodeState> nodes, const Pool& pool,
                        std::uint64_t interval_index, Exec exec) {
  if (nodes.empty()) throw DomainError("allocate: empty node list");
  check_pool(pool);
  {
    std::unordered_set<std::string_view> seen;
    for (const auto& n : nodes)
      if (!seen.insert(n.node_id).second)
        throw DomainError("allocate: duplicate node id " + n.node_id);
  }

  const std::size_t count = nodes.size();
  std::vector<double> loads(count);
  std::vector<std::uint8_t> active(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::isfinite(nodes[i].l_current)) throw DomainError("allocate: non-finite load");
    loads[i] = nodes[i].l_current;
    active[i] = nodes[i].active() ? 1 : 0;
  }
  std::vector<double> raw(count, 0.0);
  kernels::sigmoid_raw(loads, active, pool, raw, exec);

  std::vector<double> final_hz(count, 0.0);
  double vip_raw = 0.0;
  double std_usage = 0.0;
  std::size_t std_count = 0;
  for (std::size_t i = 0; i < count; ++i) {
    if (!active[i]) continue;
    if (nodes[i].tier() == PriorityClass::vip) {
      vip_raw += raw[i];
    } else {
      std_usage += nodes[i].usage_rate;
      ++std_count;
    }
  }

  const bool vip_oversubscribed = vip_raw > pool.b_avail_hz;
  const double vip_scale = vip_oversubscribed ? pool.b_avail_hz / vip_raw : 1.0;
  double vip_total = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    if (active[i] && nodes[i].tier() == PriorityClass::vip) {
      final_hz[i] = vip_oversubscribed ? raw[i] * vip_scale : raw[i];
      vip_total += final_hz[i];
    }
  }

  if (!vip_oversubscribed && std_count > 0) {
    const double remainder = std::max(0.0, pool.b_avail_hz - vip_total);
    for (std::size_t i = 0; i < count; ++i) {
      if (!active[i] || nodes[i].tier() != PriorityClass::standard) continue;
      const double share = std_usage > 0.0
                               ? remainder * (nodes[i].usage_rate / std_usage)
                               : remainder / static_cast<double>(std_count);
      final_hz[i] = std::min(share, raw[i]);
    }
  }

  AllocationPlan plan;
  plan.interval_index = interval_index;
  plan.entries.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    plan.entries.push_back(PlanEntry{nodes[i].node_id, raw[i], final_hz[i]});
  plan.normalize();
  return plan;
}

}  // namespace rfidnet
