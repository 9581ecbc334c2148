#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rfidnet/domain.hpp"
#include "rfidnet/energy.hpp"
#include "rfidnet/forecast.hpp"
#include "rfidnet/loadbal.hpp"

namespace rfidnet {

/// A scenario file or value failed validation. `field` is the dotted key
/// (e.g. "scenario.duration_ticks"); `line` is 0 when not tied to a line.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string field, std::size_t line, const std::string& what);
  const std::string& field() const noexcept { return field_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string field_;
  std::size_t line_;
};

enum class PacketSizeModel : std::uint8_t { fixed, uniform };

struct TrafficModel {
  PacketSizeModel size_model = PacketSizeModel::fixed;
  std::uint32_t packet_bits = 12000;
  std::uint32_t packet_bits_min = 12000;
  std::uint32_t packet_bits_max = 12000;
};

struct NodeSpec {
  std::string node_id;
  std::string group;
  double arrival_pps = 0.0;
  PriorityMix mix;
  std::uint64_t start_tick = 0;
  std::optional<std::uint64_t> stop_tick;  // arrivals in [start_tick, stop_tick)

  bool emitting(std::uint64_t tick) const noexcept {
    return tick >= start_tick && (!stop_tick || tick < *stop_tick);
  }
};

struct Scenario {
  std::string name = "unnamed";
  std::uint64_t seed = 0;
  std::uint64_t duration_ticks = 1;
  double tick_dt_s = 0.01;
  double spectral_efficiency = 1.0;   // bit/s/Hz
  bool contention_mode = false;       // baseline: whole pool to the PF pick each tick

  Pool pool;
  TrafficModel traffic;
  PowerParams power;
  ForecastParams forecast;
  LoadBalanceParams loadbal;
  std::uint32_t idle_ticks_to_sleep = 5;
  std::uint32_t t_pf = 100;
  double bits_per_tag_event = 12000.0;

  std::vector<NodeSpec> nodes;

  SleepPolicy sleep_policy() const noexcept {
    return SleepPolicy{loadbal.idle_frac, idle_ticks_to_sleep, true};
  }
  std::optional<std::size_t> node_index(std::string_view node_id) const noexcept;
};

/// Throws ScenarioError naming the first offending field.
void validate(const Scenario& scenario);

/// Hex FNV-1a 64 of the canonical text form with the seed zeroed.
std::string digest(const Scenario& scenario);

/// Parses the sectioned key = value format; see scenarios/README.md.
/// Throws ScenarioError with line number and field on any problem.
Scenario parse_scenario(std::string_view text);

/// Canonical text form; parse_scenario(to_text(s)) reproduces s.
std::string to_text(const Scenario& scenario);

/// Reads a scenario file. Throws std::system_error (I/O) or ScenarioError.
Scenario load_scenario(const std::string& path);

}  // namespace rfidnet
