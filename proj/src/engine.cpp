#include "rfidnet/engine.hpp"

#include <algorithm>
#include <cstring>
#include <unordered_map>

#include "rfidnet/allocator.hpp"
#include "rfidnet/energy.hpp"
#include "rfidnet/forecast.hpp"
#include "rfidnet/loadbal.hpp"
#include "rfidnet/version.hpp"

namespace rfidnet {

std::string_view to_string(Policy p) noexcept {
  return p == Policy::rfid ? "rfid" : "baseline4g";
}

Policy parse_policy(std::string_view text) {
  if (text == "rfid") return Policy::rfid;
  if (text == "baseline4g" || text == "baseline") return Policy::baseline4g;
  throw DomainError("unknown policy '" + std::string(text) + "'");
}

std::vector<Packet> generate_traffic(const Scenario& scenario, std::uint64_t seed,
                                     std::uint64_t tick) {
  PacketQueue drawn;
  for (std::size_t i = 0; i < scenario.nodes.size(); ++i)
    kernels::append_node_arrivals(scenario.nodes[i], static_cast<std::uint32_t>(i),
                                  scenario.traffic, scenario.tick_dt_s, seed, tick, drawn);
  return {drawn.begin(), drawn.end()};
}

std::vector<Delivery> serve_queue(PacketQueue& queue, double capacity_bits, std::uint64_t tick,
                                  double tick_dt_s) {
  std::vector<Delivery> out;
  kernels::serve_one(queue, std::max(0.0, capacity_bits), tick, tick_dt_s, &out);
  return out;
}

SimState initial_state(const Scenario& scenario) {
  validate(scenario);
  const std::size_t n = scenario.nodes.size();
  SimState s;
  s.nodes.reserve(n);
  const double share = scenario.pool.b_avail_hz / static_cast<double>(n);
  for (const auto& spec : scenario.nodes) {
    NodeState node;
    node.node_id = spec.node_id;
    node.priority_mix = spec.mix;
    node.allocated_bw_hz = share;
    s.nodes.push_back(std::move(node));
  }
  s.queues.resize(n);
  s.queued_bits.assign(n, 0);
  s.pf = PfState::initial(n);
  s.load_history.resize(n);
  s.idle_streak.assign(n, 0);
  s.served_bits_by_node.assign(n, 0.0);
  return s;
}

void ingest_generated(SimState& state, const Scenario& scenario, const EngineOptions& opts) {
  std::vector<kernels::ArrivalTally> tally(state.queues.size());
  kernels::generate_arrivals(scenario.nodes, scenario.traffic, scenario.tick_dt_s, scenario.seed,
                             state.tick, state.queues, tally, opts.exec);
  for (std::size_t i = 0; i < tally.size(); ++i) {
    state.arrived_packets += tally[i].packets;
    state.queued_bits[i] += tally[i].bits;
  }
}

void ingest_packets(SimState& state, std::span<const Packet> packets) {
  for (const Packet& p : packets) {
    if (p.node >= state.queues.size()) throw DomainError("ingest_packets: node index out of range");
    if (p.size_bits == 0) throw DomainError("ingest_packets: empty packet");
    state.queues[p.node].push_back(p);
    state.queued_bits[p.node] += p.size_bits;
    state.arrived_packets += 1;
  }
}

namespace {

double mean_excess(std::span<const NodeState> nodes, std::span<const double> final_hz,
                   double threshold, double bits_per_hz) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!(nodes[i].l_current > threshold)) continue;
    const double projected = load_pressure(nodes[i].demand_bits, final_hz[i] * bits_per_hz);
    sum += std::max(0.0, projected - threshold);
    ++count;
  }
  return count ? sum / static_cast<double>(count) : 0.0;
}

std::vector<double> finals_by_index(const AllocationPlan& plan, std::span<const NodeState> nodes) {
  std::unordered_map<std::string_view, std::size_t> index;
  index.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) index.emplace(nodes[i].node_id, i);
  std::vector<double> out(nodes.size(), 0.0);
  for (const auto& e : plan.entries) out[index.at(e.node_id)] = e.final_hz;
  return out;
}

}  // namespace

void advance(SimState& state, const Scenario& scenario, Policy policy, const EngineOptions& opts) {
  const std::size_t n = state.nodes.size();
  const double dt = scenario.tick_dt_s;
  const double bits_per_hz = scenario.spectral_efficiency * dt;
  const Pool& pool = scenario.pool;

  // Load against the capacity each node held last tick.
  for (std::size_t i = 0; i < n; ++i) {
    NodeState& node = state.nodes[i];
    node.demand_bits = static_cast<double>(state.queued_bits[i]);
    node.usage_rate = node.demand_bits / dt;
    node.l_current = load_pressure(node.demand_bits, node.allocated_bw_hz * bits_per_hz);
  }

  AllocationPlan plan;
  std::vector<double> final_hz;
  if (policy == Policy::rfid) {
    std::vector<NodeState> eq1_input = state.nodes;
    const SleepPolicy sleep = scenario.sleep_policy();
    for (std::size_t i = 0; i < n; ++i) {
      NodeState& node = state.nodes[i];
      auto& history = state.load_history[i];
      history.push_back(node.l_current);
      while (history.size() > scenario.forecast.window) history.pop_front();
      const std::vector<double> window(history.begin(), history.end());
      const double forecast = predict_load(window, scenario.forecast.alpha, scenario.forecast.horizon);
      if (proactive_flag(forecast, pool))
        eq1_input[i].l_current = std::max(node.l_current, forecast);

      const SleepDecision d = update_sleep(node, sleep, pool, state.idle_streak[i]);
      node.power_mode = d.mode;
      state.idle_streak[i] = d.idle_streak;
      eq1_input[i].power_mode = d.mode;
      if (d.mode == PowerMode::sleep) {
        node.allocated_bw_hz = 0.0;
        eq1_input[i].allocated_bw_hz = 0.0;
      }
    }
    const AllocationPlan raw_plan = allocate(eq1_input, pool, state.tick, opts.exec);
    plan = rebalance(raw_plan, state.nodes, pool, scenario.loadbal);
    final_hz = finals_by_index(plan, state.nodes);
    const std::vector<double> before = finals_by_index(raw_plan, state.nodes);
    state.last_status.overload_excess_before =
        mean_excess(state.nodes, before, pool.l_threshold, bits_per_hz);
    state.last_status.overload_excess_after =
        mean_excess(state.nodes, final_hz, pool.l_threshold, bits_per_hz);
  } else {
    plan = fixed_split(state.nodes, pool, state.tick);
    final_hz = finals_by_index(plan, state.nodes);
    const double excess = mean_excess(state.nodes, final_hz, pool.l_threshold, bits_per_hz);
    state.last_status.overload_excess_before = excess;
    state.last_status.overload_excess_after = excess;
  }
  state.last_status.total_final_hz = plan.total_final_hz;

  for (std::size_t i = 0; i < n; ++i) state.nodes[i].allocated_bw_hz = final_hz[i];

  std::vector<double> capacity(n, 0.0);
  if (policy == Policy::baseline4g && scenario.contention_mode) {
    if (auto pick = pf_select(state.nodes, state.pf, scenario.spectral_efficiency))
      capacity[*pick] = pool.b_avail_hz * bits_per_hz;
  } else {
    for (std::size_t i = 0; i < n; ++i) capacity[i] = final_hz[i] * bits_per_hz;
  }

  std::vector<ServeTally> served(n);
  kernels::serve_all(state.queues, capacity, state.tick, dt, served, opts.exec);

  std::vector<double> served_bits(n);
  double tick_bits = 0.0;
  double tick_latency = 0.0;
  std::uint64_t tick_delivered = 0;
  for (std::size_t i = 0; i < n; ++i) {
    served_bits[i] = served[i].served_bits;
    state.queued_bits[i] -= static_cast<std::uint64_t>(served[i].served_bits);
    state.served_bits_by_node[i] += served[i].served_bits;
    tick_bits += served[i].served_bits;
    tick_latency += served[i].latency_sum_ms;
    tick_delivered += served[i].delivered;
  }
  if (policy == Policy::baseline4g) state.pf = pf_update(state.pf, served_bits, scenario.t_pf, dt);

  std::vector<double> watts(n);
  kernels::node_power(state.nodes, scenario.power, watts, opts.exec);
  const std::vector<double> tick_watts[] = {std::move(watts)};
  const double tick_energy = accumulate_energy(tick_watts, dt);

  const double utilization = tick_bits / (pool.b_avail_hz * bits_per_hz);
  state.delivered_packets += tick_delivered;
  state.delivered_bits += tick_bits;
  state.latency_sum_ms += tick_latency;
  state.utilization_sum += utilization;
  state.energy_joules += tick_energy;
  if (opts.keep_traces) {
    state.traces.spectrum_utilization.push_back(utilization);
    state.traces.mean_latency_ms.push_back(
        tick_delivered ? tick_latency / static_cast<double>(tick_delivered) : 0.0);
    state.traces.throughput_bps.push_back(tick_bits / dt);
    state.traces.energy_joules.push_back(tick_energy);
  }
  state.last_plan = std::move(plan);
  state.tick += 1;
}

void step(SimState& state, const Scenario& scenario, Policy policy, const EngineOptions& opts) {
  ingest_generated(state, scenario, opts);
  advance(state, scenario, policy, opts);
}

namespace {

class Fnv {
 public:
  void bytes(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h_ ^= p[i];
      h_ *= 0x100000001b3ULL;
    }
  }
  void u64(std::uint64_t v) { bytes(&v, sizeof v); }
  void f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    u64(bits);
  }
  void str(std::string_view s) {
    u64(s.size());
    bytes(s.data(), s.size());
  }
  std::string hex() const {
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out(16, '0');
    std::uint64_t h = h_;
    for (int k = 15; k >= 0; --k) {
      out[static_cast<std::size_t>(k)] = kHex[h & 0xF];
      h >>= 4;
    }
    return out;
  }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

}  // namespace

std::string state_digest(const SimState& s) {
  Fnv h;
  h.u64(s.tick);
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    const NodeState& n = s.nodes[i];
    h.str(n.node_id);
    h.f64(n.l_current);
    h.f64(n.demand_bits);
    h.f64(n.usage_rate);
    h.u64(n.priority_mix.vip);
    h.u64(n.priority_mix.standard);
    h.u64(static_cast<std::uint64_t>(n.power_mode));
    h.f64(n.allocated_bw_hz);
    h.u64(s.queues[i].size());
    for (const Packet& p : s.queues[i]) {
      h.u64(p.arrival_tick);
      h.u64(p.size_bits);
    }
    h.u64(s.queued_bits[i]);
    h.f64(s.pf.avg_tput_bps[i]);
    for (double l : s.load_history[i]) h.f64(l);
    h.u64(s.idle_streak[i]);
    h.f64(s.served_bits_by_node[i]);
  }
  for (const auto& e : s.last_plan.entries) {
    h.str(e.node_id);
    h.f64(e.raw_sigmoid_hz);
    h.f64(e.final_hz);
  }
  h.u64(s.arrived_packets);
  h.u64(s.delivered_packets);
  h.f64(s.delivered_bits);
  h.f64(s.latency_sum_ms);
  h.f64(s.utilization_sum);
  h.f64(s.energy_joules);
  return h.hex();
}

MetricsReport summarize(const SimState& state, const Scenario& scenario, Policy policy) {
  MetricsReport r;
  r.tool_version = std::string(kToolVersion);
  r.policy = std::string(to_string(policy));
  r.scenario_name = scenario.name;
  r.scenario_digest = digest(scenario);
  r.seed = scenario.seed;
  r.duration_ticks = state.tick;
  r.tick_dt_s = scenario.tick_dt_s;
  const double ticks = static_cast<double>(state.tick);
  if (state.tick > 0) {
    r.spectrum_utilization = state.utilization_sum / ticks;
    r.throughput_bps = state.delivered_bits / (ticks * scenario.tick_dt_s);
  }
  r.mean_latency_ms = state.delivered_packets
                          ? state.latency_sum_ms / static_cast<double>(state.delivered_packets)
                          : 0.0;
  r.energy_joules = state.energy_joules;
  r.arrived_packets = state.arrived_packets;
  r.delivered_packets = state.delivered_packets;
  for (const auto& q : state.queues) r.queued_packets += q.size();
  r.served_bits_by_node = state.served_bits_by_node;
  r.traces = state.traces;
  return r;
}

MetricsReport run(const Scenario& scenario, Policy policy, const EngineOptions& opts) {
  if (scenario.duration_ticks == 0) throw DomainError("run: duration_ticks must be >= 1");
  SimState state = initial_state(scenario);
  if (opts.keep_traces) {
    state.traces.spectrum_utilization.reserve(scenario.duration_ticks);
    state.traces.mean_latency_ms.reserve(scenario.duration_ticks);
    state.traces.throughput_bps.reserve(scenario.duration_ticks);
    state.traces.energy_joules.reserve(scenario.duration_ticks);
  }
  for (std::uint64_t t = 0; t < scenario.duration_ticks; ++t) step(state, scenario, policy, opts);
  return summarize(state, scenario, policy);
}

std::vector<MetricsReport> run_many(std::span<const RunJob> jobs, Exec exec) {
  for (const auto& job : jobs) validate(job.scenario);
  std::vector<MetricsReport> out(jobs.size());
  const auto n = static_cast<std::int64_t>(jobs.size());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) out[i] = run(jobs[i].scenario, jobs[i].policy);
  } else {
    for (std::int64_t i = 0; i < n; ++i) out[i] = run(jobs[i].scenario, jobs[i].policy);
  }
  return out;
}

}  // namespace rfidnet
