#include <cmath>
#include <numeric>
#include <random>

#include "asyncdfl/errors.hpp"
#include "asyncdfl/wireless/radio.hpp"
#include "asyncdfl/wireless/schedule.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace asyncdfl;

namespace {

// Two or more nodes at given positions with unit fading and no interferers.
RadioEnvironment line_env(std::vector<Point> pts, double power, double noise, double alpha) {
  RadioEnvironment env;
  env.positions = std::move(pts);
  env.tx_power_w = power;
  env.noise_w = noise;
  env.path_loss_exponent = alpha;
  env.fading.assign(env.positions.size() * env.positions.size(), 1.0);
  return env;
}

// Two nodes; node 0 is heard at `s0`, node 1 at `s1`.
SinrMatrix pair(double s0, double s1) {
  SinrMatrix m(2);
  m.at(1, 0) = s0;
  m.at(0, 1) = s1;
  return m;
}

SinrMatrix random_matrix(std::size_t n, std::mt19937_64& rng) {
  std::lognormal_distribution<double> ln(1.0, 1.5);
  SinrMatrix m(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t t = 0; t < n; ++t) {
      if (r != t) m.at(r, t) = ln(rng);
    }
  }
  return m;
}

}  // namespace

TEST_CASE("unit conversions") {
  CHECK(db_to_linear(0.0) == 1.0);
  CHECK(db_to_linear(10.0) == doctest::Approx(10.0));
  CHECK(dbm_to_watts(30.0) == 1.0);
}

TEST_CASE("placement") {
  CHECK(place_nodes(10, 500.0, 4)[7].x == place_nodes(10, 500.0, 4)[7].x);
  CHECK_THROWS_AS(place_nodes(1, 500.0, 4), ConfigError);

  const auto pts = place_nodes(1000, 500.0, 5);
  double mean = 0.0;
  for (const auto& p : pts) {
    const double r = std::hypot(p.x, p.y);
    CHECK(r <= 500.0);
    mean += r / 1000.0;
  }
  const double sigma = 500.0 / std::sqrt(18.0) / std::sqrt(1000.0);
  CHECK(std::abs(mean - 2.0 * 500.0 / 3.0) <= 3.0 * sigma);

  const auto ppp = place_nodes_ppp(20.0 / (3.14159 * 500.0 * 500.0), 500.0, 6);
  CHECK(ppp.size() >= 2);
}

TEST_CASE("sinr examples") {
  // P h d^-a = 1 * 1 * 2^-4 equals the noise power.
  auto unit = line_env({{0, 0}, {2, 0}}, 1.0, 1.0 / 16.0, 4.0);
  CHECK(sinr(unit, 0, 1) == doctest::Approx(1.0).epsilon(1e-15));

  auto hand = line_env({{0, 0}, {2, 0}}, 1.0, 0.01, 4.0);
  CHECK(sinr(hand, 0, 1) == doctest::Approx(6.25).epsilon(1e-14));
  CHECK(sinr(hand, 1, 0) == doctest::Approx(6.25).epsilon(1e-14));

  // An interferer at the transmitter's distance on the other side.
  auto jammed = line_env({{0, 0}, {2, 0}}, 1.0, 0.0, 4.0);
  jammed.interferers = {{-2, 0}};
  jammed.interferer_fading = {1.0, 1.0};
  CHECK(sinr(jammed, 1, 0) == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(sinr(hand, 1, 1), ContractViolation);
  const auto m = sinr_matrix(hand);
  CHECK(m.at(1, 0) == sinr(hand, 0, 1));
}

TEST_CASE("environment defaults and fading redraws") {
  const WirelessConfig cfg;
  CHECK(cfg.cell_radius_m == 500.0);
  CHECK(cfg.bandwidth_hz == 1e7);
  auto env = make_environment(cfg, 5, 9);
  CHECK(env.noise_w == doctest::Approx(dbm_to_watts(-174.0) * 1e7));
  const auto first = env.fading;
  redraw_fading(env, InterferenceMode::SingleCell, 3);
  CHECK(env.fading != first);
  const auto third = env.fading;
  redraw_fading(env, InterferenceMode::SingleCell, 3);
  CHECK(env.fading == third);

  redraw_fading(env, InterferenceMode::HexRing, 1);
  REQUIRE(env.interferers.size() == 6);
  for (const auto& p : env.interferers) {
    const double r = std::hypot(p.x, p.y);
    CHECK(r >= (std::sqrt(3.0) - 1.0) * 500.0);
    CHECK(r <= (std::sqrt(3.0) + 1.0) * 500.0);
  }
  for (double s : {sinr(env, 0, 1), sinr(env, 2, 4)}) CHECK(s > 0.0);
}

TEST_CASE("schedule examples") {
  const SinrMatrix m{{0, 2, 0.5}, {2, 0, 2}, {0.5, 2, 0}};
  const auto s = build_schedule(m, 1.0);
  CHECK(s.receivers[0] == std::vector<std::size_t>{1});
  CHECK(s.receivers[1] == std::vector<std::size_t>{0, 2});
  CHECK(s.receivers[2] == std::vector<std::size_t>{1});
  CHECK(s.scheduled == std::vector<std::size_t>{0, 1, 2});

  const auto all = build_schedule(m, 1e-300);
  CHECK(all.receivers[0] == std::vector<std::size_t>{1, 2});
  CHECK(all.scheduled.size() == 3);

  const auto none = build_schedule(m, 1e300);
  CHECK(none.scheduled.empty());
  for (const auto& r : none.receivers) CHECK(r.empty());

  const auto rates = min_rates(s, m);
  CHECK(rates[1] == doctest::Approx(std::log2(3.0)));
}

TEST_CASE("allocation examples") {
  const auto even = allocate_bandwidth(build_schedule(pair(1.0, 1.0), 0.5), pair(1.0, 1.0), 1e7);
  CHECK(even.bandwidths[0] == doctest::Approx(5e6));
  CHECK(even.bandwidths[1] == doctest::Approx(5e6));

  // log2(1 + 1) = 1 and log2(1 + 7) = 3.
  const auto m = pair(1.0, 7.0);
  const auto a = allocate_bandwidth(build_schedule(m, 0.5), m, 12.0);
  CHECK(a.bandwidths[0] == doctest::Approx(9.0).epsilon(1e-14));
  CHECK(a.bandwidths[1] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(a.bandwidths[0] * a.rates[0] == doctest::Approx(9.0).epsilon(1e-14));
  CHECK(a.bandwidths[1] * a.rates[1] == doctest::Approx(9.0).epsilon(1e-14));

  // Split grid at resolution 1e-4 B.
  double best = -1.0, arg = 0.0;
  for (int k = 0; k <= 10000; ++k) {
    const double b0 = 12.0 * k / 10000.0;
    const double obj = std::min(b0 * 1.0, (12.0 - b0) * 3.0);
    if (obj > best) {
      best = obj;
      arg = b0;
    }
  }
  CHECK(std::abs(arg - a.bandwidths[0]) <= 1e-3 * 12.0);
}

TEST_CASE("lattice oracle agrees with full enumeration") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> r(0.1, 5.0);
  for (int k = 0; k < 30; ++k) {
    std::vector<double> rates(2 + static_cast<std::size_t>(k % 3));
    for (auto& x : rates) x = r(rng);
    CHECK(oracle::maxmin_lattice(rates, 7.0, 40) == doctest::Approx(oracle::maxmin_grid(rates, 7.0, 40)).epsilon(1e-12));
  }
}

TEST_CASE("closed form is max-min optimal and equalizes") {
  std::mt19937_64 rng(42);
  for (int k = 0; k < 40; ++k) {
    const std::size_t n = 2 + static_cast<std::size_t>(k % 7);
    const auto m = random_matrix(n, rng);
    const auto sched = build_schedule(m, 1.0);
    if (sched.scheduled.empty()) continue;
    const auto a = allocate_bandwidth(sched, m, 1e7);
    std::vector<double> rates;
    double sum = 0.0, rmax = 0.0;
    for (std::size_t i : a.schedule.scheduled) {
      rates.push_back(a.rates[i]);
      sum += a.bandwidths[i];
      rmax = std::max(rmax, a.rates[i]);
      CHECK(a.bandwidths[i] * a.rates[i] ==
            doctest::Approx(a.bandwidths[a.schedule.scheduled[0]] * a.rates[a.schedule.scheduled[0]]).epsilon(1e-9));
    }
    CHECK(sum == doctest::Approx(1e7).epsilon(1e-9));
    const double obj = min_rate_objective(a.schedule, m, a.bandwidths);
    CHECK(std::abs(obj - oracle::maxmin_lattice(rates, 1e7, 20000)) <= 1e-3 * 1e7 * rmax);

    std::mt19937_64 draw(k);
    CHECK(obj >= min_rate_objective(a.schedule, m, uniform_allocation(sched, m, 1e7).bandwidths) * (1 - 1e-12));
    const auto rnd = random_allocation(sched, m, 1e7, draw);
    CHECK(obj >= min_rate_objective(a.schedule, m, rnd.bandwidths) * (1 - 1e-12));
    double rsum = 0.0;
    for (double b : rnd.bandwidths) rsum += b;
    CHECK(rsum == doctest::Approx(1e7).epsilon(1e-12));
  }
}

TEST_CASE("allocation drops zero-rate nodes and rejects empty schedules") {
  SinrMatrix m(3);
  m.at(1, 0) = 3.0;
  m.at(0, 1) = 1e-300;  // log2(1 + 1e-300) rounds to zero
  Schedule s = build_schedule(m, 1e-320);
  REQUIRE(s.is_scheduled(1));
  const auto a = allocate_bandwidth(s, m, 10.0);
  CHECK_FALSE(a.schedule.is_scheduled(1));
  CHECK(a.bandwidths[0] == 10.0);
  CHECK(a.bandwidths[1] == 0.0);
  CHECK_THROWS_AS(allocate_bandwidth(build_schedule(m, 1e300), m, 10.0), ContractViolation);
}

TEST_CASE("duration examples") {
  Schedule s;
  s.receivers = {{1}, {}};
  s.scheduled = {0};
  const auto d = transmission_durations(s, {1e6, 0.0}, pair(1.0, 0.0), 1.0, 1e6, 1.0);
  CHECK(d.exact.at({1, 0}) == 1.0);
  CHECK(d.slots.at({1, 0}) == 1);
  CHECK(d.gamma_t == 1);

  const auto longer = transmission_durations(s, {1e6, 0.0}, pair(1.0, 0.0), 1.0, 2.5e6, 1.0);
  CHECK(longer.slots.at({1, 0}) == 3);

  CHECK_THROWS_AS(transmission_durations(s, {0.0, 0.0}, pair(1.0, 0.0), 1.0, 1e6, 1.0), ContractViolation);

  // More bandwidth never lengthens a transfer.
  std::uint64_t prev = ~0ULL;
  for (double b = 1e5; b <= 1e7; b *= 1.5) {
    const auto slots = transmission_durations(s, {b, 0.0}, pair(1.0, 0.0), 1.0, 1e7, 1.0).slots.at({1, 0});
    CHECK(slots <= prev);
    prev = slots;
  }
}

TEST_CASE("waiting duration examples") {
  Schedule all;
  all.scheduled = {0, 1, 2, 3, 4};
  CHECK(waiting_duration(all, 5, 1.0) == 0);
  Schedule three;
  three.scheduled = {0, 2, 4};
  CHECK(waiting_duration(three, 5, 1.0) == 2);
  Schedule four;
  four.scheduled = {0, 1, 2, 3};
  CHECK(waiting_duration(four, 5, 3.0) == 3);
}

TEST_CASE("uniform and optimal plans coincide when rates are equal") {
  SinrMatrix m(4, 3.0);
  WirelessConfig cfg;
  std::mt19937_64 rng(1);
  const auto opt = plan_epoch(m, cfg, 1.0, 1e7, AllocationPolicy::Optimal, rng);
  const auto uni = plan_epoch(m, cfg, 1.0, 1e7, AllocationPolicy::Uniform, rng);
  CHECK(opt.durations.slots == uni.durations.slots);
  CHECK(opt.gamma == uni.gamma);
  CHECK(opt.gamma_w == 0);

  cfg.gamma_db = 30.0;
  const auto empty = plan_epoch(m, cfg, 1.0, 1e7, AllocationPolicy::Optimal, rng);
  CHECK(empty.schedule.scheduled.empty());
  CHECK(empty.gamma_w == 4);
  CHECK(empty.objective == 0.0);
}
