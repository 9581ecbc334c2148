#pragma once

// Per-node data-parallel kernels. Each kernel has a serial reference path and
// an OpenMP path; both write one slot per node and never reduce across nodes,
// so callers sum in node order and results stay bit-identical between modes.

#include <cmath>
#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "rfidnet/domain.hpp"

namespace rfidnet {

enum class Exec : std::uint8_t { serial, parallel };

struct Packet {
  std::uint64_t arrival_tick = 0;
  std::uint32_t size_bits = 0;
  std::uint32_t node = 0;  // index into the scenario's node list

  friend bool operator==(const Packet&, const Packet&) = default;
};

using PacketQueue = std::deque<Packet>;

struct Delivery {
  Packet packet;
  double latency_ms = 0.0;
};

struct ServeTally {
  double served_bits = 0.0;
  std::uint64_t delivered = 0;
  double latency_sum_ms = 0.0;
};

struct PowerParams;
struct TrafficModel;
struct NodeSpec;

namespace kernels {

/// 1 / (1 + exp(-x)), evaluated without overflow for large |x|.
inline double logistic(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

/// raw_hz[i] = b_avail_hz * sigmoid(k * (loads[i] - l_threshold)); entries with
/// active[i] == false are written as 0.
void sigmoid_raw(std::span<const double> loads, std::span<const std::uint8_t> active,
                 const Pool& pool, std::span<double> raw_hz, Exec exec);

/// FIFO service of one queue; appends to `deliveries` when non-null.
ServeTally serve_one(PacketQueue& queue, double capacity_bits, std::uint64_t tick,
                     double tick_dt_s, std::vector<Delivery>* deliveries);

/// Serves every queue against its own per-tick capacity.
void serve_all(std::span<PacketQueue> queues, std::span<const double> capacity_bits,
               std::uint64_t tick, double tick_dt_s, std::span<ServeTally> out, Exec exec);

struct ArrivalTally {
  std::uint64_t packets = 0;
  std::uint64_t bits = 0;
};

/// Appends node `node`'s arrivals for `tick` to `out`, drawn from the
/// (seed, node, tick) stream.
ArrivalTally append_node_arrivals(const NodeSpec& spec, std::uint32_t node,
                                  const TrafficModel& traffic, double tick_dt_s,
                                  std::uint64_t seed, std::uint64_t tick, PacketQueue& out);

/// Draws this tick's arrivals for every node straight into its queue.
void generate_arrivals(std::span<const NodeSpec> nodes, const TrafficModel& traffic,
                       double tick_dt_s, std::uint64_t seed, std::uint64_t tick,
                       std::span<PacketQueue> queues, std::span<ArrivalTally> out, Exec exec);

void node_power(std::span<const NodeState> nodes, const PowerParams& params,
                std::span<double> watts, Exec exec);

/// Left-to-right sum; the only reduction the engine uses.
double ordered_sum(std::span<const double> values) noexcept;

}  // namespace kernels
}  // namespace rfidnet
