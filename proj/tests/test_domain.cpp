#include "doctest.h"
#include "rfidnet/domain.hpp"

using namespace rfidnet;

TEST_CASE("tag id validation") {
  CHECK(validate_tag_id("12345ABC"));
  CHECK_FALSE(validate_tag_id(""));
  CHECK_FALSE(validate_tag_id("AB CD"));
  CHECK(validate_tag_id(std::string(32, 'z')));
  CHECK_FALSE(validate_tag_id(std::string(33, 'z')));
  CHECK_FALSE(validate_tag_id("A_B"));
  CHECK(validate_node_id("cell_7-b"));
  CHECK_FALSE(validate_node_id("cell 7"));
}

TEST_CASE("tag events reject invalid ids") {
  const auto ev = make_tag_event("A1", "N3", PriorityClass::vip, 1500);
  CHECK(ev.tag_id == "A1");
  CHECK(ev.timestamp_ms == 1500);
  CHECK_THROWS_AS(make_tag_event("", "N3", PriorityClass::vip, 0), DomainError);
  CHECK_THROWS_AS(make_tag_event("A1", "N 3", PriorityClass::vip, 0), DomainError);
}

TEST_CASE("node and pool checks") {
  NodeState n;
  n.node_id = "N0";
  CHECK_NOTHROW(check_node(n));
  n.tier();
  CHECK(n.tier() == PriorityClass::standard);
  n.priority_mix.vip = 1;
  CHECK(n.tier() == PriorityClass::vip);
  n.power_mode = PowerMode::sleep;
  n.allocated_bw_hz = 5;
  CHECK_THROWS_AS(check_node(n), DomainError);
  n.allocated_bw_hz = 0;
  n.l_current = -1;
  CHECK_THROWS_AS(check_node(n), DomainError);

  CHECK_NOTHROW(check_pool(Pool{}));
  CHECK_THROWS_AS(check_pool(Pool{0, 1, 1}), DomainError);
  CHECK_THROWS_AS(check_pool(Pool{1e6, -1, 1}), DomainError);
  CHECK_THROWS_AS(check_pool(Pool{1e6, 1, 0}), DomainError);
}

TEST_CASE("load pressure") {
  CHECK(load_pressure(0, 0) == 0.0);
  CHECK(load_pressure(10, 0) == kLoadCap);
  CHECK(load_pressure(500, 1000) == 0.5);
  CHECK(load_pressure(1e12, 1) == kLoadCap);
}

TEST_CASE("plan normalization orders by allocation then id") {
  AllocationPlan p;
  p.entries = {{"B", 0, 5}, {"A", 0, 5}, {"C", 0, 9}};
  p.normalize();
  CHECK(p.entries[0].node_id == "C");
  CHECK(p.entries[1].node_id == "A");
  CHECK(p.total_final_hz == 19.0);
  CHECK(p.find("B")->final_hz == 5.0);
  CHECK(p.find("Z") == nullptr);
}
