#include <algorithm>
#include <cstdint>
#include <random>
#include <sstream>

#include "asyncdfl/errors.hpp"
#include "asyncdfl/protocol/node_state.hpp"
#include "asyncdfl/protocol/wire.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace asyncdfl;

namespace {

NodeState filled(NodeId id, std::vector<ParameterVector> w, std::uint64_t t = 0, std::uint64_t stamp = 0) {
  NodeState s = make_node_state(id, w.size(), w[id]);
  s.t = t;
  for (NodeId j = 0; j < w.size(); ++j) {
    if (j != id) deliver_into(s, {j, stamp, w[j]});
  }
  return s;
}

std::vector<ParameterVector> scalars(std::initializer_list<double> xs) {
  std::vector<ParameterVector> out;
  for (double x : xs) out.push_back(ParameterVector{x});
  return out;
}

}  // namespace

TEST_CASE("shared parameter examples") {
  const std::vector<double> half{0.5, 0.5};
  CHECK(shared_parameter(filled(0, scalars({9.0, 4.0})), half)[0] == 4.0);

  const std::vector<double> a{0.2, 0.3, 0.5};
  const auto same = filled(1, scalars({7.0, -1.0, 7.0}));
  CHECK(shared_parameter(same, a)[0] == doctest::Approx(7.0).epsilon(1e-15));

  CHECK(shared_parameter(filled(0, scalars({0.0, 1.0, 2.0})), a)[0] == doctest::Approx(1.625).epsilon(1e-15));
}

TEST_CASE("shared parameter errors") {
  NodeState empty = make_node_state(0, 3, ParameterVector{0.0});
  const std::vector<double> a{0.2, 0.3, 0.5};
  CHECK_THROWS_AS(shared_parameter(empty, a), ProtocolStateError);
  const std::vector<double> lone{1.0, 0.0};
  CHECK_THROWS_AS(shared_parameter(filled(0, scalars({1.0, 2.0})), lone), DegenerateTopology);
}

TEST_CASE("aggregate examples") {
  const std::vector<double> a{0.2, 0.3, 0.5};
  CHECK(aggregate(filled(0, scalars({3.0, 3.0, 3.0})), a)[0] == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(aggregate(filled(0, scalars({0.0, 1.0, 2.0})), a)[0] == doctest::Approx(1.3).epsilon(1e-15));
}

TEST_CASE("aggregate equals the shared-parameter form on random states") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 2 + static_cast<std::size_t>(k % 6);
    std::vector<double> a(n);
    double sum = 0.0;
    for (auto& x : a) sum += (x = u(rng));
    for (auto& x : a) x /= sum;
    std::vector<ParameterVector> w;
    for (std::size_t j = 0; j < n; ++j) w.push_back(fixtures::random_point(3, 2.0, rng));
    const NodeId i = static_cast<NodeId>(k % n);
    const auto state = filled(i, w);
    ParameterVector dual = (1.0 - a[i]) * shared_parameter(state, a);
    dual.axpy(a[i], state.w);
    CHECK(distance(dual, aggregate(state, a)) <= 1e-12);
  }
}

TEST_CASE("local update examples") {
  auto q = fixtures::scalar_quadratic({0.0});
  const std::vector<double> one_node{1.0};
  NodeState s = make_node_state(0, 1, ParameterVector{2.0});
  const auto next = local_update(s, q, one_node, 0.1);
  CHECK(next.w[0] == doctest::Approx(1.8).epsilon(1e-15));
  CHECK(next.t == 1);

  auto flat = fixtures::scalar_quadratic({2.0});
  CHECK(local_update(s, flat, one_node, 0.1).w == s.w);

  // Gradient of 0.5||x - (-3,-4)||^2 at (0,0) is (3,4); with eta = 1 the
  // candidate is (-3,-4), projected to the unit ball.
  auto pull = fixtures::quadratic({{-3.0, -4.0}});
  pull.regularizer = {RegularizerKind::L2, 0.5};
  NodeState origin = make_node_state(0, 1, ParameterVector{0.0, 0.0});
  const auto ball = local_update(origin, pull, one_node, 1.0);
  CHECK(ball.w[0] == doctest::Approx(-0.6).epsilon(1e-15));
  CHECK(ball.w[1] == doctest::Approx(-0.8).epsilon(1e-15));
}

TEST_CASE("delivery semantics") {
  const std::vector<double> half{0.5, 0.5};
  NodeState s = filled(0, scalars({0.0, 1.0}));
  s = deliver(s, {1, 3, ParameterVector{5.0}});
  CHECK(shared_parameter(s, half)[0] == 5.0);

  NodeState dup = s;
  dup.received[1] = false;
  CHECK(deliver_into(dup, {1, 3, ParameterVector{5.0}}) == DeliveryStatus::Duplicate);
  CHECK(dup.received[1]);
  dup.received[1] = false;
  CHECK(dup.latest_received == s.latest_received);

  NodeState late = filled(0, scalars({0.0, 1.0}), 0, 7);
  const NodeState before = late;
  CHECK(deliver_into(late, {1, 5, ParameterVector{9.0}}) == DeliveryStatus::DroppedStale);
  CHECK(late.latest_received == before.latest_received);
  CHECK(late.received == before.received);

  CHECK_THROWS_AS(deliver_into(late, {0, 9, ParameterVector{1.0}}), ContractViolation);
  CHECK_THROWS_AS(deliver_into(late, {1, 9, ParameterVector{1.0, 2.0}}), ContractViolation);
}

TEST_CASE("shuffled delivery order keeps the highest stamp per sender") {
  std::mt19937_64 rng(32);
  std::vector<StampedParameter> msgs;
  for (NodeId j = 1; j < 4; ++j) {
    for (std::uint64_t st = 0; st < 10; ++st) msgs.push_back({j, st, ParameterVector{10.0 * j + static_cast<double>(st)}});
  }
  NodeState reference = make_node_state(0, 4, ParameterVector{0.0});
  for (const auto& m : msgs) deliver_into(reference, m);
  for (int trial = 0; trial < 50; ++trial) {
    std::shuffle(msgs.begin(), msgs.end(), rng);
    NodeState s = make_node_state(0, 4, ParameterVector{0.0});
    for (const auto& m : msgs) deliver_into(s, m);
    CHECK(s.latest_received == reference.latest_received);
  }
  CHECK(reference.latest_received[2]->stamp == 9);
}

TEST_CASE("staleness check against the formula") {
  NodeState s = filled(0, scalars({0.0, 0.0, 0.0}), 10, 6);
  CHECK(check_staleness(s, 5));
  deliver_into(s, {2, 10, ParameterVector{0.0}});
  CHECK(check_staleness(s, 5));
  CHECK(*max_staleness(s) == 4);

  NodeState edge = filled(0, scalars({0.0, 0.0}), 10, 5);
  CHECK_FALSE(check_staleness(edge, 5));

  for (std::uint64_t stamp = 0; stamp <= 3; ++stamp) {
    NodeState early = filled(0, scalars({0.0, 0.0}), 3, stamp);
    const bool expected = std::max<std::int64_t>(3 - 5, 0) < static_cast<std::int64_t>(stamp) && stamp <= 3;
    CHECK(check_staleness(early, 5) == expected);
  }
  CHECK_FALSE(check_staleness(filled(0, scalars({0.0, 0.0}), 3, 0), 5));
  CHECK(check_staleness(filled(0, scalars({0.0, 0.0}), 3, 1), 5));

  // A stamp from the future also fails.
  CHECK_FALSE(check_staleness(filled(0, scalars({0.0, 0.0}), 3, 4), 5));

  NodeState missing = make_node_state(0, 2, ParameterVector{0.0});
  CHECK_FALSE(check_staleness(missing, 5));
  CHECK_FALSE(max_staleness(missing).has_value());
}

TEST_CASE("wire records round trip") {
  std::mt19937_64 rng(33);
  std::vector<std::uint8_t> bytes;
  std::vector<StampedParameter> sent;
  for (int k = 0; k < 20; ++k) {
    sent.push_back({static_cast<NodeId>(k), static_cast<std::uint64_t>(k) * 1000003ULL,
                    fixtures::random_point(static_cast<std::size_t>(k % 5), 3.0, rng)});
    wire::append_message(bytes, sent.back());
  }
  std::size_t offset = 0;
  for (const auto& m : sent) CHECK(wire::read_message(bytes, offset) == m);
  CHECK(offset == bytes.size());

  std::vector<std::uint8_t> one;
  wire::append_message(one, {0x01020304u, 5, ParameterVector{1.0}});
  REQUIRE(one.size() == 4 + 8 + 4 + 8);
  CHECK(one[0] == 0x04);
  CHECK(one[3] == 0x01);
  CHECK(one[4] == 5);

  one.pop_back();
  offset = 0;
  CHECK_THROWS(wire::read_message(one, offset));
}

TEST_CASE("dump files round trip") {
  std::vector<wire::DeliveryEvent> events{{0, 1, {0, 1, ParameterVector{1.5, -2.0}}},
                                          {4, 0, {1, 3, ParameterVector{0.25, 8.0}}}};
  std::stringstream buf;
  wire::write_dump(buf, 2, events);
  const std::string raw = buf.str();
  CHECK(raw.substr(0, 8) == "ADFLTRC1");
  const auto dump = wire::read_dump(buf);
  CHECK(dump.node_count == 2);
  CHECK(dump.events == events);

  std::stringstream bad("NOTATRACE");
  CHECK_THROWS(wire::read_dump(bad));
}
