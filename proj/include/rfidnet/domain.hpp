#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rfidnet {

/// Thrown when an operation receives values outside its contract
/// (non-finite loads, empty node lists, duplicate ids, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class PriorityClass : std::uint8_t { vip, standard };

enum class PowerMode : std::uint8_t { active, sleep };

/// Loads are clamped here so a node whose previous allocation was tiny
/// cannot feed an unbounded value into the sigmoid.
inline constexpr double kLoadCap = 10.0;

inline constexpr std::size_t kMaxTokenLength = 32;

/// True iff `token` is 1..32 characters of [A-Za-z0-9].
bool validate_tag_id(std::string_view token) noexcept;

/// Node ids additionally allow '_' and '-'.
bool validate_node_id(std::string_view token) noexcept;

struct TagEvent {
  std::string tag_id;
  std::string node_id;
  PriorityClass priority = PriorityClass::standard;
  std::uint64_t timestamp_ms = 0;

  friend bool operator==(const TagEvent&, const TagEvent&) = default;
};

/// Builds a TagEvent, rejecting invalid ids.
TagEvent make_tag_event(std::string tag_id, std::string node_id, PriorityClass priority,
                        std::uint64_t timestamp_ms);

struct PriorityMix {
  std::uint32_t vip = 0;
  std::uint32_t standard = 0;

  bool has_vip() const noexcept { return vip > 0; }
  friend bool operator==(const PriorityMix&, const PriorityMix&) = default;
};

struct NodeState {
  std::string node_id;
  double l_current = 0.0;       // dimensionless utilization pressure
  double demand_bits = 0.0;     // queued backlog
  double usage_rate = 0.0;      // bits/s, demand-rate measure used for proportional split
  PriorityMix priority_mix;
  PowerMode power_mode = PowerMode::active;
  double allocated_bw_hz = 0.0;

  bool active() const noexcept { return power_mode == PowerMode::active; }
  PriorityClass tier() const noexcept {
    return priority_mix.has_vip() ? PriorityClass::vip : PriorityClass::standard;
  }
};

/// Throws DomainError when a NodeState violates its invariants.
void check_node(const NodeState& node);

struct Pool {
  double b_avail_hz = 100e6;
  double l_threshold = 1.0;
  double sensitivity_k = 1.0;
};

void check_pool(const Pool& pool);

struct PlanEntry {
  std::string node_id;
  double raw_sigmoid_hz = 0.0;
  double final_hz = 0.0;

  friend bool operator==(const PlanEntry&, const PlanEntry&) = default;
};

struct AllocationPlan {
  std::uint64_t interval_index = 0;
  std::vector<PlanEntry> entries;
  double total_final_hz = 0.0;

  const PlanEntry* find(std::string_view node_id) const noexcept;
  /// Re-sorts entries (descending final_hz, ascending node_id) and recomputes the total.
  void normalize();

  friend bool operator==(const AllocationPlan&, const AllocationPlan&) = default;
};

/// Load pressure of `demand_bits` against a capacity of `capacity_bits` per tick.
/// Zero capacity maps to kLoadCap when there is demand, 0 otherwise.
double load_pressure(double demand_bits, double capacity_bits) noexcept;

std::string_view to_string(PriorityClass p) noexcept;
std::string_view to_string(PowerMode m) noexcept;

}  // namespace rfidnet
