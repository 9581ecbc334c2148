#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "rfidnet/domain.hpp"
#include "rfidnet/kernels.hpp"

namespace rfidnet {

struct RawAllocation {
  std::string node_id;
  double sigmoid_fraction = 0.0;
  double raw_hz = 0.0;
};

/// Logistic share of the pool for a node at `l_current`:
///   1 / (1 + exp(-k * (l_current - l_threshold)))
/// Strictly increasing in l_current; 0.5 exactly at the threshold.
/// Throws DomainError on non-finite input or k <= 0.
double sigmoid_share(double l_current, double l_threshold, double sensitivity_k);

/// Bandwidth a single ACTIVE node would get from the pool on its own.
/// Throws DomainError for a sleeping node.
RawAllocation raw_allocation(const NodeState& node, const Pool& pool);

/// Priority-then-proportional allocation for one control interval.
///
/// VIP-tier nodes (any VIP tag attached) are granted their raw sigmoid
/// bandwidth first, scaled down together if they oversubscribe the pool. The
/// remainder is split across STANDARD nodes in proportion to usage_rate
/// (equally when every usage_rate is 0) and each share is capped at the node's
/// own raw value; capped-off bandwidth stays unallocated. Sleeping nodes get 0.
///
/// Entries are ordered by descending final_hz, then ascending node_id.
/// Throws DomainError on an empty list or duplicate ids.
AllocationPlan allocate(std::span<const NodeState> nodes, const Pool& pool,
                        std::uint64_t interval_index = 0, Exec exec = Exec::serial);

}  // namespace rfidnet
