#include "rfidnet/loadbal.hpp"

#include <unordered_map>
#include <vector>

namespace rfidnet {

LoadClass classify_load(const NodeState& node, const Pool& pool, double idle_frac) {
  if (node.l_current > pool.l_threshold) return LoadClass::overloaded;
  if (node.l_current < idle_frac * pool.l_threshold) return LoadClass::idle;
  return LoadClass::normal;
}

AllocationPlan rebalance(const AllocationPlan& plan, std::span<const NodeState> nodes,
                         const Pool& pool, const LoadBalanceParams& params) {
  if (!(params.transfer_frac > 0.0 && params.transfer_frac <= 1.0))
    throw DomainError("rebalance: transfer_frac must be in (0,1]");

  std::unordered_map<std::string_view, const NodeState*> by_id;
  for (const auto& n : nodes) by_id.emplace(n.node_id, &n);
  if (plan.entries.size() != by_id.size())
    throw DomainError("rebalance: plan and node list disagree");

  std::vector<LoadClass> cls(plan.entries.size());
  double excess_total = 0.0;
  for (std::size_t i = 0; i < plan.entries.size(); ++i) {
    auto it = by_id.find(plan.entries[i].node_id);
    if (it == by_id.end())
      throw DomainError("rebalance: unknown node id " + plan.entries[i].node_id);
    const NodeState& n = *it->second;
    cls[i] = classify_load(n, pool, params.idle_frac);
    if (cls[i] == LoadClass::overloaded) excess_total += n.l_current - pool.l_threshold;
  }
  if (excess_total <= 0.0) return plan;

  AllocationPlan out = plan;
  double pot = 0.0;
  for (std::size_t i = 0; i < out.entries.size(); ++i) {
    if (cls[i] != LoadClass::idle) continue;
    const double give = params.transfer_frac * out.entries[i].final_hz;
    out.entries[i].final_hz -= give;
    pot += give;
  }
  if (pot > 0.0) {
    // The last recipient takes whatever rounding left so the pot is fully spent.
    std::size_t last = out.entries.size();
    for (std::size_t i = 0; i < out.entries.size(); ++i)
      if (cls[i] == LoadClass::overloaded) last = i;
    double handed = 0.0;
    for (std::size_t i = 0; i < out.entries.size(); ++i) {
      if (cls[i] != LoadClass::overloaded) continue;
      const double excess = by_id.at(out.entries[i].node_id)->l_current - pool.l_threshold;
      const double take = i == last ? pot - handed : pot * (excess / excess_total);
      out.entries[i].final_hz += std::max(0.0, take);
      handed += take;
    }
  }
  out.normalize();
  return out;
}

std::string_view to_string(LoadClass c) noexcept {
  switch (c) {
    case LoadClass::overloaded: return "OVERLOADED";
    case LoadClass::normal: return "NORMAL";
    case LoadClass::idle: return "IDLE";
  }
  return "?";
}

}  // namespace rfidnet
