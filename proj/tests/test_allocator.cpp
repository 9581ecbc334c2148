#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "rfidnet/allocator.hpp"

using namespace rfidnet;

namespace {

NodeState node(std::string id, double load, double usage = 1.0, std::uint32_t vip = 0) {
  NodeState n;
  n.node_id = std::move(id);
  n.l_current = load;
  n.usage_rate = usage;
  n.priority_mix.vip = vip;
  n.priority_mix.standard = 1;
  return n;
}

const double kLn3 = std::log(3.0);

}  // namespace

TEST_CASE("sigmoid share matches the extended-precision oracle") {
  CHECK(std::fabs(sigmoid_share(0.5, 0.5, 1.0) - 0.5) < 1e-12);
  CHECK(std::fabs(sigmoid_share(2.0 + kLn3, 2.0, 1.0) - 0.75) < 1e-12);
  CHECK(std::fabs(sigmoid_share(2.0 - kLn3, 2.0, 1.0) - 0.25) < 1e-12);
  for (const auto& f : oracle::kFrozenLogistic) {
    CHECK(std::fabs(static_cast<long double>(sigmoid_share(f.x, 0.0, 1.0)) - f.value) < 1e-15L);
    CHECK(std::fabs(oracle::logistic(f.x) - f.value) < 1e-17L);
  }
  oracle::StateGen gen(3);
  for (int i = 0; i < 2000; ++i) {
    const double l = gen.uniform(-50, 50), th = gen.uniform(-5, 5), k = gen.uniform(0.01, 4);
    const long double want = oracle::logistic(static_cast<long double>(k) * (l - th));
    CHECK(std::fabs(sigmoid_share(l, th, k) - want) <= 1e-14L + 1e-13L * want);
  }
}

TEST_CASE("sigmoid share rejects bad input") {
  CHECK_THROWS_AS(sigmoid_share(NAN, 1, 1), DomainError);
  CHECK_THROWS_AS(sigmoid_share(1, INFINITY, 1), DomainError);
  CHECK_THROWS_AS(sigmoid_share(1, 1, 0), DomainError);
  CHECK_THROWS_AS(sigmoid_share(1, 1, -2), DomainError);
  CHECK(sigmoid_share(1e6, 0, 1) == 1.0);
  CHECK(sigmoid_share(-1e6, 0, 1) == 0.0);
}

TEST_CASE("raw allocation examples") {
  const Pool pool{100e6, 3.0, 1.0};
  CHECK(raw_allocation(node("A", 3.0), pool).raw_hz == doctest::Approx(50e6).epsilon(1e-12));
  CHECK(raw_allocation(node("A", 3.0 + kLn3), pool).raw_hz == doctest::Approx(75e6).epsilon(1e-12));
  CHECK(raw_allocation(node("A", 23.0), pool).raw_hz >= 99.999e6);
  NodeState asleep = node("A", 3.0);
  asleep.power_mode = PowerMode::sleep;
  CHECK_THROWS_AS(raw_allocation(asleep, pool), DomainError);
}

TEST_CASE("allocate examples") {
  const Pool pool{100e6, 3.0, 1.0};
  SUBCASE("single node at threshold") {
    const NodeState n[] = {node("A", 3.0)};
    const auto plan = allocate(n, pool);
    CHECK(oracle::final_of(plan, "A") == doctest::Approx(50e6));
    CHECK(plan.total_final_hz == doctest::Approx(50e6));
  }
  SUBCASE("two identical standard nodes") {
    const NodeState n[] = {node("A", 3.0 + kLn3), node("B", 3.0 + kLn3)};
    const auto plan = allocate(n, pool);
    CHECK(oracle::final_of(plan, "A") == doctest::Approx(50e6));
    CHECK(oracle::final_of(plan, "B") == doctest::Approx(50e6));
    const auto grid = oracle::grid_allocate({{3.0 + kLn3, 1, false}, {3.0 + kLn3, 1, false}}, 100,
                                            3.0, 1.0);
    CHECK(grid == std::vector<long>{50, 50});
  }
  SUBCASE("VIP first, standard gets the capped remainder") {
    const NodeState n[] = {node("V", 3.0 + kLn3, 1.0, 2), node("S", 3.0 + kLn3)};
    const auto plan = allocate(n, pool);
    CHECK(oracle::final_of(plan, "V") == doctest::Approx(75e6));
    CHECK(oracle::final_of(plan, "S") == doctest::Approx(25e6));
    const auto grid = oracle::grid_allocate({{3.0 + kLn3, 1, true}, {3.0 + kLn3, 1, false}}, 100,
                                            3.0, 1.0);
    CHECK(std::abs(grid[0] - 75) <= 1);
    CHECK(std::abs(grid[1] - 25) <= 1);
  }
  SUBCASE("oversubscribed VIP tier is scaled and standard starves") {
    const NodeState n[] = {node("V1", 10, 1, 1), node("V2", 10, 1, 1), node("S", 10)};
    const auto plan = allocate(n, pool);
    CHECK(plan.total_final_hz == doctest::Approx(100e6));
    CHECK(oracle::final_of(plan, "V1") == doctest::Approx(50e6));
    CHECK(oracle::final_of(plan, "S") == 0.0);
  }
  SUBCASE("sleeping nodes get nothing, all-zero usage splits equally") {
    NodeState n[] = {node("A", 10, 0), node("B", 10, 0), node("C", 10, 0)};
    n[2].power_mode = PowerMode::sleep;
    const auto plan = allocate(n, pool);
    CHECK(oracle::final_of(plan, "C") == 0.0);
    CHECK(oracle::final_of(plan, "A") == doctest::Approx(50e6));
    CHECK(oracle::final_of(plan, "B") == doctest::Approx(50e6));
  }
}

TEST_CASE("allocate ordering and errors") {
  const Pool pool{100e6, 3.0, 1.0};
  const NodeState n[] = {node("B", 3.0), node("A", 3.0), node("C", 9.0, 5.0)};
  const auto plan = allocate(n, pool, 17);
  CHECK(plan.interval_index == 17);
  REQUIRE(plan.entries.size() == 3);
  CHECK(plan.entries[0].node_id == "C");
  CHECK(plan.entries[1].node_id == "A");
  CHECK(plan.entries[2].node_id == "B");

  CHECK_THROWS_AS(allocate(std::span<const NodeState>{}, pool), DomainError);
  const NodeState dup[] = {node("A", 1), node("A", 2)};
  CHECK_THROWS_AS(allocate(dup, pool), DomainError);
}

TEST_CASE("allocate agrees with the grid oracle on small networks") {
  oracle::StateGen gen(11);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t count = gen.index(1, 5);
    const double th = gen.uniform(0.5, 8.0), k = gen.uniform(0.05, 3.0);
    std::vector<NodeState> nodes = gen.nodes(count);
    std::vector<oracle::GridNode> grid_nodes;
    for (const auto& n : nodes)
      grid_nodes.push_back({n.l_current, n.usage_rate, n.priority_mix.has_vip(), !n.active()});
    const auto plan = allocate(nodes, Pool{100e6, th, k});
    const auto cells = oracle::grid_allocate(grid_nodes, 100, th, k);
    for (std::size_t i = 0; i < count; ++i)
      CHECK(std::fabs(oracle::final_of(plan, nodes[i].node_id) / 1e6 -
                      static_cast<double>(cells[i])) <= 1.0);
  }
}

TEST_CASE("allocate properties on random networks") {
  oracle::StateGen gen(12);
  for (int trial = 0; trial < 1000; ++trial) {
    const Pool pool = gen.pool();
    auto nodes = gen.nodes(gen.index(1, 50));
    const auto plan = allocate(nodes, pool);

    // Conservation.
    CHECK(oracle::sum_final(plan) <= pool.b_avail_hz * (1 + 1e-9));
    for (const auto& e : plan.entries) {
      CHECK(e.final_hz >= 0.0);
      CHECK(e.final_hz <= e.raw_sigmoid_hz * (1 + 1e-12) + 1e-9);
    }

    // Monotonicity of raw bandwidth in load.
    const std::size_t pick = gen.index(0, nodes.size() - 1);
    if (nodes[pick].active()) {
      auto bumped = nodes;
      bumped[pick].l_current += gen.uniform(0.0, 3.0);
      CHECK(raw_allocation(bumped[pick], pool).raw_hz >= raw_allocation(nodes[pick], pool).raw_hz);
    }

    // Scale covariance: exact for powers of two; otherwise within 1e-12 of the
    // pool, since a standard share is a difference against the pool.
    const double c = gen.coin(0.5) ? 4.0 : gen.uniform(0.1, 10.0);
    const Pool scaled{pool.b_avail_hz * c, pool.l_threshold, pool.sensitivity_k};
    const auto plan_c = allocate(nodes, scaled);
    for (const auto& e : plan.entries) {
      const auto* ec = plan_c.find(e.node_id);
      REQUIRE(ec != nullptr);
      if (c == 4.0) {
        CHECK(ec->raw_sigmoid_hz == e.raw_sigmoid_hz * c);
        CHECK(ec->final_hz == e.final_hz * c);
      } else {
        CHECK(std::fabs(ec->final_hz - e.final_hz * c) <= 1e-12 * scaled.b_avail_hz);
        CHECK(ec->raw_sigmoid_hz == doctest::Approx(e.raw_sigmoid_hz * c).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("VIP dominance and standard proportionality") {
  oracle::StateGen gen(13);
  for (int trial = 0; trial < 1000; ++trial) {
    const Pool pool = gen.pool();
    auto nodes = gen.nodes(gen.index(2, 30), 0.0);
    // Twin pair differing only in tier.
    nodes[1].l_current = nodes[0].l_current;
    nodes[1].usage_rate = nodes[0].usage_rate;
    nodes[0].priority_mix.vip = 1;
    nodes[1].priority_mix.vip = 0;
    const auto plan = allocate(nodes, pool);
    CHECK(oracle::final_of(plan, "N0") >= oracle::final_of(plan, "N1"));

    // Among uncapped standard nodes, final ratios follow usage ratios.
    std::vector<const PlanEntry*> uncapped;
    std::vector<double> usage;
    for (const auto& n : nodes) {
      if (n.tier() != PriorityClass::standard || n.usage_rate <= 0.0) continue;
      const auto* e = plan.find(n.node_id);
      if (e->final_hz > 0.0 && e->final_hz < e->raw_sigmoid_hz) {
        uncapped.push_back(e);
        usage.push_back(n.usage_rate);
      }
    }
    for (std::size_t i = 1; i < uncapped.size(); ++i) {
      const double got = uncapped[i]->final_hz / uncapped[0]->final_hz;
      const double want = usage[i] / usage[0];
      CHECK(std::fabs(got - want) <= 1e-9 * want);
    }
  }
}

TEST_CASE("serial and parallel allocation are identical") {
  oracle::StateGen gen(14);
  for (int trial = 0; trial < 50; ++trial) {
    const auto nodes = gen.nodes(gen.index(1, 3000));
    const Pool pool = gen.pool();
    CHECK(allocate(nodes, pool, 0, Exec::serial) == allocate(nodes, pool, 0, Exec::parallel));
  }
}
