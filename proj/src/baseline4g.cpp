#include "rfidnet/baseline4g.hpp"

#include <algorithm>

namespace rfidnet {

AllocationPlan fixed_split(std::span<const NodeState> nodes, const Pool& pool,
                           std::uint64_t interval_index) {
  if (nodes.empty()) throw DomainError("fixed_split: empty node list");
  check_pool(pool);
  const double share = pool.b_avail_hz / static_cast<double>(nodes.size());
  AllocationPlan plan;
  plan.interval_index = interval_index;
  plan.entries.reserve(nodes.size());
  for (const auto& n : nodes) plan.entries.push_back(PlanEntry{n.node_id, share, share});
  plan.normalize();
  return plan;
}

std::optional<std::size_t> pf_select(std::span<const NodeState> nodes, const PfState& pf,
                                     double spectral_efficiency) {
  std::optional<std::size_t> best;
  double best_metric = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].demand_bits <= 0.0) continue;
    const double avg = i < pf.avg_tput_bps.size() ? std::max(pf.avg_tput_bps[i], kPfEpsilonBps)
                                                  : kPfEpsilonBps;
    const double metric = nodes[i].allocated_bw_hz * spectral_efficiency / avg;
    if (!best || metric > best_metric ||
        (metric == best_metric && nodes[i].node_id < nodes[*best].node_id)) {
      best = i;
      best_metric = metric;
    }
  }
  return best;
}

PfState pf_update(const PfState& pf, std::span<const double> served_bits, std::uint32_t t_pf,
                  double tick_dt_s) {
  if (t_pf < 1) throw DomainError("pf_update: t_pf must be >= 1");
  if (!(tick_dt_s > 0.0)) throw DomainError("pf_update: tick_dt_s must be > 0");
  if (served_bits.size() != pf.avg_tput_bps.size())
    throw DomainError("pf_update: served vector size mismatch");
  const double w = 1.0 / static_cast<double>(t_pf);
  PfState out = pf;
  for (std::size_t i = 0; i < served_bits.size(); ++i) {
    const double next = (1.0 - w) * pf.avg_tput_bps[i] + w * (served_bits[i] / tick_dt_s);
    out.avg_tput_bps[i] = std::max(next, kPfEpsilonBps);
  }
  return out;
}

}  // namespace rfidnet
