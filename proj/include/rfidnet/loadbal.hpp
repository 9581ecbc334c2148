#pragma once

#include <span>

#include "rfidnet/domain.hpp"

namespace rfidnet {

enum class LoadClass : std::uint8_t { overloaded, normal, idle };

struct LoadBalanceParams {
  double transfer_frac = 0.5;
  double idle_frac = 0.25;
};

/// OVERLOADED above the threshold, IDLE below idle_frac of it; the
/// threshold itself is NORMAL.
LoadClass classify_load(const NodeState& node, const Pool& pool, double idle_frac);

/// Moves transfer_frac of every IDLE node's allocation into a pot shared by
/// OVERLOADED nodes in proportion to their excess load. Returns the plan
/// unchanged when nothing is overloaded. The plan total is preserved.
/// Throws DomainError when the plan names a node not in `nodes` or misses one.
AllocationPlan rebalance(const AllocationPlan& plan, std::span<const NodeState> nodes,
                         const Pool& pool, const LoadBalanceParams& params);

std::string_view to_string(LoadClass c) noexcept;

}  // namespace rfidnet
