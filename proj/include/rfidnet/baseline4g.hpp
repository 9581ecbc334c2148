#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rfidnet/domain.hpp"

namespace rfidnet {

/// Floor on the smoothed throughput so the PF ratio stays finite.
inline constexpr double kPfEpsilonBps = 1.0;
inline constexpr std::uint32_t kDefaultPfWindowTicks = 100;

struct PfState {
  std::vector<double> avg_tput_bps;

  static PfState initial(std::size_t nodes) { return PfState{std::vector<double>(nodes, kPfEpsilonBps)}; }
  friend bool operator==(const PfState&, const PfState&) = default;
};

/// Equal split of the pool over every node; ignores load and power mode.
AllocationPlan fixed_split(std::span<const NodeState> nodes, const Pool& pool,
                           std::uint64_t interval_index = 0);

/// Index of the backlogged node with the largest instantaneous-rate /
/// average-throughput ratio, lowest node_id on ties; nullopt when no queue
/// holds data.
std::optional<std::size_t> pf_select(std::span<const NodeState> nodes, const PfState& pf,
                                     double spectral_efficiency = 1.0);

PfState pf_update(const PfState& pf, std::span<const double> served_bits, std::uint32_t t_pf,
                  double tick_dt_s);

}  // namespace rfidnet
