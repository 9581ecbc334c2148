#include "rfidnet/kernels.hpp"

#include <cmath>

#include "rfidnet/energy.hpp"
#include "rfidnet/rng.hpp"
#include "rfidnet/scenario.hpp"

namespace rfidnet::kernels {

namespace {

inline std::int64_t signed_size(std::size_t n) { return static_cast<std::int64_t>(n); }

}  // namespace

void sigmoid_raw(std::span<const double> loads, std::span<const std::uint8_t> active,
                 const Pool& pool, std::span<double> raw_hz, Exec exec) {
  const std::int64_t n = signed_size(loads.size());
  const double k = pool.sensitivity_k;
  const double th = pool.l_threshold;
  const double b = pool.b_avail_hz;
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
      raw_hz[i] = active[i] ? logistic(k * (loads[i] - th)) * b : 0.0;
  } else {
    for (std::int64_t i = 0; i < n; ++i)
      raw_hz[i] = active[i] ? logistic(k * (loads[i] - th)) * b : 0.0;
  }
}

ServeTally serve_one(PacketQueue& queue, double capacity_bits, std::uint64_t tick,
                     double tick_dt_s, std::vector<Delivery>* deliveries) {
  ServeTally tally;
  double used = 0.0;
  while (!queue.empty()) {
    const Packet& head = queue.front();
    if (used + head.size_bits > capacity_bits) break;
    used += head.size_bits;
    const double latency =
        static_cast<double>(tick - head.arrival_tick + 1) * tick_dt_s * 1000.0;
    tally.delivered += 1;
    tally.latency_sum_ms += latency;
    if (deliveries) deliveries->push_back(Delivery{head, latency});
    queue.pop_front();
  }
  tally.served_bits = used;
  return tally;
}

void serve_all(std::span<PacketQueue> queues, std::span<const double> capacity_bits,
               std::uint64_t tick, double tick_dt_s, std::span<ServeTally> out, Exec exec) {
  const std::int64_t n = signed_size(queues.size());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t i = 0; i < n; ++i)
      out[i] = serve_one(queues[i], capacity_bits[i], tick, tick_dt_s, nullptr);
  } else {
    for (std::int64_t i = 0; i < n; ++i)
      out[i] = serve_one(queues[i], capacity_bits[i], tick, tick_dt_s, nullptr);
  }
}

ArrivalTally append_node_arrivals(const NodeSpec& spec, std::uint32_t node,
                                  const TrafficModel& traffic, double tick_dt_s,
                                  std::uint64_t seed, std::uint64_t tick, PacketQueue& out) {
  ArrivalTally tally;
  if (!spec.emitting(tick) || spec.arrival_pps <= 0.0) return tally;
  Pcg32 rng = traffic_stream(seed, node, tick);
  const std::uint64_t count = rng.poisson(spec.arrival_pps * tick_dt_s);
  for (std::uint64_t p = 0; p < count; ++p) {
    std::uint32_t bits = traffic.packet_bits;
    if (traffic.size_model == PacketSizeModel::uniform) {
      const std::uint32_t span = traffic.packet_bits_max - traffic.packet_bits_min + 1;
      bits = traffic.packet_bits_min + (span == 0 ? rng.next_u32() : rng.next_below(span));
    }
    out.push_back(Packet{tick, bits, node});
    tally.packets += 1;
    tally.bits += bits;
  }
  return tally;
}

void generate_arrivals(std::span<const NodeSpec> nodes, const TrafficModel& traffic,
                       double tick_dt_s, std::uint64_t seed, std::uint64_t tick,
                       std::span<PacketQueue> queues, std::span<ArrivalTally> out, Exec exec) {
  const std::int64_t n = signed_size(nodes.size());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
      out[i] = append_node_arrivals(nodes[i], static_cast<std::uint32_t>(i), traffic, tick_dt_s,
                                    seed, tick, queues[i]);
  } else {
    for (std::int64_t i = 0; i < n; ++i)
      out[i] = append_node_arrivals(nodes[i], static_cast<std::uint32_t>(i), traffic, tick_dt_s,
                                    seed, tick, queues[i]);
  }
}

void node_power(std::span<const NodeState> nodes, const PowerParams& params,
                std::span<double> watts, Exec exec) {
  const std::int64_t n = signed_size(nodes.size());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) watts[i] = rfidnet::node_power(nodes[i], params);
  } else {
    for (std::int64_t i = 0; i < n; ++i) watts[i] = rfidnet::node_power(nodes[i], params);
  }
}

double ordered_sum(std::span<const double> values) noexcept {
  double total = 0.0;
  for (double v : values) total += v;
  return total;
}

}  // namespace rfidnet::kernels
