#include "rfidnet/domain.hpp"

#include <algorithm>
#include <cmath>

namespace rfidnet {

namespace {

bool is_alnum(char c) noexcept {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
}

}  // namespace

bool validate_tag_id(std::string_view token) noexcept {
  if (token.empty() || token.size() > kMaxTokenLength) return false;
  return std::all_of(token.begin(), token.end(), is_alnum);
}

bool validate_node_id(std::string_view token) noexcept {
  if (token.empty() || token.size() > kMaxTokenLength) return false;
  return std::all_of(token.begin(), token.end(),
                     [](char c) { return is_alnum(c) || c == '_' || c == '-'; });
}

TagEvent make_tag_event(std::string tag_id, std::string node_id, PriorityClass priority,
                        std::uint64_t timestamp_ms) {
  if (!validate_tag_id(tag_id)) throw DomainError("invalid tag_id '" + tag_id + "'");
  if (!validate_node_id(node_id)) throw DomainError("invalid node_id '" + node_id + "'");
  return TagEvent{std::move(tag_id), std::move(node_id), priority, timestamp_ms};
}

void check_node(const NodeState& node) {
  if (!validate_node_id(node.node_id)) throw DomainError("invalid node_id '" + node.node_id + "'");
  auto nonneg = [&](double v, const char* what) {
    if (!std::isfinite(v) || v < 0.0)
      throw DomainError(node.node_id + ": " + what + " must be finite and >= 0");
  };
  nonneg(node.l_current, "l_current");
  nonneg(node.demand_bits, "demand_bits");
  nonneg(node.usage_rate, "usage_rate");
  nonneg(node.allocated_bw_hz, "allocated_bw_hz");
  if (node.power_mode == PowerMode::sleep && node.allocated_bw_hz != 0.0)
    throw DomainError(node.node_id + ": sleeping node holds bandwidth");
}

void check_pool(const Pool& pool) {
  if (!std::isfinite(pool.b_avail_hz) || pool.b_avail_hz <= 0.0)
    throw DomainError("pool.b_avail_hz must be > 0");
  if (!std::isfinite(pool.l_threshold) || pool.l_threshold < 0.0)
    throw DomainError("pool.l_threshold must be >= 0");
  if (!std::isfinite(pool.sensitivity_k) || pool.sensitivity_k <= 0.0)
    throw DomainError("pool.sensitivity_k must be > 0");
}

const PlanEntry* AllocationPlan::find(std::string_view node_id) const noexcept {
  auto it = std::find_if(entries.begin(), entries.end(),
                         [&](const PlanEntry& e) { return e.node_id == node_id; });
  return it == entries.end() ? nullptr : &*it;
}

void AllocationPlan::normalize() {
  std::sort(entries.begin(), entries.end(), [](const PlanEntry& a, const PlanEntry& b) {
    if (a.final_hz != b.final_hz) return a.final_hz > b.final_hz;
    return a.node_id < b.node_id;
  });
  total_final_hz = 0.0;
  for (const auto& e : entries) total_final_hz += e.final_hz;
}

double load_pressure(double demand_bits, double capacity_bits) noexcept {
  if (demand_bits <= 0.0) return 0.0;
  if (capacity_bits <= 0.0) return kLoadCap;
  return std::min(demand_bits / capacity_bits, kLoadCap);
}

std::string_view to_string(PriorityClass p) noexcept {
  return p == PriorityClass::vip ? "VIP" : "STD";
}

std::string_view to_string(PowerMode m) noexcept {
  return m == PowerMode::active ? "ACTIVE" : "SLEEP";
}

}  // namespace rfidnet
