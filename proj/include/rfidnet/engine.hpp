#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rfidnet/baseline4g.hpp"
#include "rfidnet/domain.hpp"
#include "rfidnet/kernels.hpp"
#include "rfidnet/scenario.hpp"

namespace rfidnet {

enum class Policy : std::uint8_t { rfid, baseline4g };

std::string_view to_string(Policy p) noexcept;
/// Accepts "rfid" and "baseline4g" (also "baseline"). Throws DomainError.
Policy parse_policy(std::string_view text);

/// Draws the arrivals of every node for one tick. A pure function of
/// (scenario, seed, tick): each node uses its own counter-based stream.
std::vector<Packet> generate_traffic(const Scenario& scenario, std::uint64_t seed,
                                     std::uint64_t tick);

/// FIFO service without partial packets; unused capacity is lost.
/// Latency counts the arrival tick as one full tick of waiting.
std::vector<Delivery> serve_queue(PacketQueue& queue, double capacity_bits, std::uint64_t tick,
                                  double tick_dt_s);

/// Status of the plan built this tick; drives the STATUS wire message.
struct TickStatus {
  double total_final_hz = 0.0;
  double overload_excess_before = 0.0;  // mean projected excess of OVERLOADED nodes
  double overload_excess_after = 0.0;
};

struct Traces {
  std::vector<double> spectrum_utilization;
  std::vector<double> mean_latency_ms;
  std::vector<double> throughput_bps;
  std::vector<double> energy_joules;

  friend bool operator==(const Traces&, const Traces&) = default;
};

struct SimState {
  std::uint64_t tick = 0;
  std::vector<NodeState> nodes;
  std::vector<PacketQueue> queues;
  std::vector<std::uint64_t> queued_bits;
  PfState pf;
  std::vector<std::deque<double>> load_history;
  std::vector<std::uint32_t> idle_streak;
  AllocationPlan last_plan;
  TickStatus last_status;

  std::uint64_t arrived_packets = 0;
  std::uint64_t delivered_packets = 0;
  double delivered_bits = 0.0;
  double latency_sum_ms = 0.0;
  double utilization_sum = 0.0;
  double energy_joules = 0.0;
  std::vector<double> served_bits_by_node;  // cumulative
  Traces traces;
};

struct EngineOptions {
  Exec exec = Exec::serial;
  bool keep_traces = true;
};

/// Fresh state: every node ACTIVE holding an equal share of the pool.
SimState initial_state(const Scenario& scenario);

/// Queues scenario-generated arrivals for state.tick.
void ingest_generated(SimState& state, const Scenario& scenario, const EngineOptions& opts = {});

/// Queues externally supplied packets (replay). Packets carry node indices.
void ingest_packets(SimState& state, std::span<const Packet> packets);

/// Runs the rest of the tick pipeline on already-ingested arrivals: load
/// update, forecasting and sleep (RFID), allocation, rebalancing (RFID),
/// queue service, energy, traces. Advances state.tick by one.
void advance(SimState& state, const Scenario& scenario, Policy policy,
             const EngineOptions& opts = {});

/// ingest_generated + advance.
void step(SimState& state, const Scenario& scenario, Policy policy,
          const EngineOptions& opts = {});

/// FNV-1a digest over the complete dynamic state, for determinism checks.
std::string state_digest(const SimState& state);

struct MetricsReport {
  std::string tool_version;
  std::string policy;
  std::string scenario_name;
  std::string scenario_digest;
  std::uint64_t seed = 0;
  std::uint64_t duration_ticks = 0;
  double tick_dt_s = 0.0;

  double spectrum_utilization = 0.0;
  double mean_latency_ms = 0.0;
  double throughput_bps = 0.0;
  double energy_joules = 0.0;

  std::uint64_t arrived_packets = 0;
  std::uint64_t delivered_packets = 0;
  std::uint64_t queued_packets = 0;
  std::vector<double> served_bits_by_node;

  Traces traces;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// Builds the report from a finished state.
MetricsReport summarize(const SimState& state, const Scenario& scenario, Policy policy);

/// Runs duration_ticks steps. Throws DomainError for a zero duration.
MetricsReport run(const Scenario& scenario, Policy policy, const EngineOptions& opts = {});

/// Runs independent (scenario, policy) jobs, in parallel when exec says so.
struct RunJob {
  Scenario scenario;
  Policy policy = Policy::rfid;
};
std::vector<MetricsReport> run_many(std::span<const RunJob> jobs, Exec exec);

}  // namespace rfidnet
