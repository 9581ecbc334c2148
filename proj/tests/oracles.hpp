#pragma once

// Reference implementations used by the unit and acceptance tests. They are
// written independently of the library code: extended precision for the
// logistic, integer 1 MHz grid arithmetic for allocation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rfidnet/domain.hpp"

namespace oracle {

/// Logistic values evaluated at 40 significant digits, frozen here.
struct FrozenLogistic {
  double x;
  long double value;
};

inline constexpr FrozenLogistic kFrozenLogistic[] = {
    {0.0, 0.5L},
    {1.0, 0.7310585786300048792511592L},
    {-1.0, 0.2689414213699951207488408L},
    {2.5, 0.9241418199787564488066938L},
    {-7.0, 0.0009110511944006453578633238L},
    {20.0, 0.9999999979388463818097964L},
};

/// 1 / (1 + e^-x) by a long double Taylor series of e^-|x| with argument
/// halving, so it shares no code path with the library's std::exp.
inline long double logistic(long double x) {
  const long double a = x < 0 ? -x : x;
  int halvings = 0;
  long double r = a;
  while (r > 0.125L) {
    r /= 2.0L;
    ++halvings;
  }
  long double term = 1.0L, sum = 1.0L;
  for (int n = 1; n < 40; ++n) {
    term *= -r / static_cast<long double>(n);
    sum += term;
  }
  for (int i = 0; i < halvings; ++i) sum *= sum;  // e^-a
  return x >= 0 ? 1.0L / (1.0L + sum) : sum / (1.0L + sum);
}

struct GridNode {
  double l_current = 0.0;
  double usage_rate = 0.0;
  bool vip = false;
  bool asleep = false;
};

/// Rules of the priority-then-proportional allocation evaluated on an
/// integer grid: each node's entitlement is computed in long double, then
/// the pool is handed out one cell at a time, round-robin over the nodes
/// still below their entitlement. Returns cells per node.
inline std::vector<long> grid_allocate(const std::vector<GridNode>& nodes, long pool_cells,
                                       double l_threshold, double k) {
  const std::size_t n = nodes.size();
  std::vector<long double> raw(n, 0.0L);
  for (std::size_t i = 0; i < n; ++i)
    if (!nodes[i].asleep)
      raw[i] = static_cast<long double>(pool_cells) *
               logistic(static_cast<long double>(k) *
                        (static_cast<long double>(nodes[i].l_current) - l_threshold));

  std::vector<long double> target(n, 0.0L);
  long double vip_sum = 0.0L;
  for (std::size_t i = 0; i < n; ++i)
    if (!nodes[i].asleep && nodes[i].vip) vip_sum += raw[i];
  const long double pool = static_cast<long double>(pool_cells);
  if (vip_sum > pool) {
    for (std::size_t i = 0; i < n; ++i)
      if (!nodes[i].asleep && nodes[i].vip) target[i] = raw[i] * pool / vip_sum;
  } else {
    for (std::size_t i = 0; i < n; ++i)
      if (!nodes[i].asleep && nodes[i].vip) target[i] = raw[i];
    long double usage = 0.0L;
    std::size_t members = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (!nodes[i].asleep && !nodes[i].vip) {
        usage += nodes[i].usage_rate;
        ++members;
      }
    const long double rest = pool - vip_sum;
    for (std::size_t i = 0; i < n; ++i) {
      if (nodes[i].asleep || nodes[i].vip) continue;
      const long double share = usage > 0 ? rest * nodes[i].usage_rate / usage
                                          : rest / static_cast<long double>(members);
      target[i] = std::min(share, raw[i]);
    }
  }

  std::vector<long> cells(n, 0);
  long left = pool_cells;
  bool progress = true;
  while (left > 0 && progress) {
    progress = false;
    for (std::size_t i = 0; i < n && left > 0; ++i) {
      if (static_cast<long double>(cells[i] + 1) <= target[i]) {
        ++cells[i];
        --left;
        progress = true;
      }
    }
  }
  return cells;
}

/// Random network state for property tests.
struct StateGen {
  std::mt19937_64 rng;
  explicit StateGen(std::uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  }
  bool coin(double p) { return std::bernoulli_distribution(p)(rng); }

  rfidnet::Pool pool() {
    return rfidnet::Pool{uniform(1e6, 1e9), uniform(0.5, 8.0), uniform(0.05, 3.0)};
  }

  std::vector<rfidnet::NodeState> nodes(std::size_t count, double sleep_p = 0.1) {
    std::vector<rfidnet::NodeState> out(count);
    for (std::size_t i = 0; i < count; ++i) {
      auto& n = out[i];
      n.node_id = "N" + std::to_string(i);
      n.l_current = coin(0.1) ? 0.0 : uniform(0.0, rfidnet::kLoadCap);
      n.demand_bits = uniform(0.0, 1e6);
      n.usage_rate = coin(0.1) ? 0.0 : uniform(0.0, 1e8);
      n.priority_mix.vip = coin(0.3) ? static_cast<std::uint32_t>(index(1, 5)) : 0;
      n.priority_mix.standard = static_cast<std::uint32_t>(index(0, 20));
      n.power_mode = coin(sleep_p) ? rfidnet::PowerMode::sleep : rfidnet::PowerMode::active;
      n.allocated_bw_hz = 0.0;
    }
    return out;
  }
};

inline double final_of(const rfidnet::AllocationPlan& plan, const std::string& id) {
  const auto* e = plan.find(id);
  return e ? e->final_hz : -1.0;
}

inline double sum_final(const rfidnet::AllocationPlan& plan) {
  double s = 0.0;
  for (const auto& e : plan.entries) s += e.final_hz;
  return s;
}

}  // namespace oracle
