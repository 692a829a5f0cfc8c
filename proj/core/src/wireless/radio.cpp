#include "asyncdfl/wireless/radio.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "asyncdfl/errors.hpp"

namespace asyncdfl {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

SinrMatrix::SinrMatrix(std::initializer_list<std::initializer_list<double>> rows) : n_(rows.size()) {
  data_.reserve(n_ * n_);
  for (const auto& r : rows) {
    if (r.size() != n_) throw ContractViolation("SinrMatrix: rows must form a square matrix");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

namespace {

Point uniform_in_disk(std::mt19937_64& rng, double radius, Point center = {}) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double r = radius * std::sqrt(unif(rng));
  const double theta = 2.0 * std::numbers::pi * unif(rng);
  return {center.x + r * std::cos(theta), center.y + r * std::sin(theta)};
}

double positive_exponential(std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  double h = 0.0;
  while (!(h > 0.0)) h = expo(rng);
  return h;
}

void check_distinct(const std::vector<Point>& pts) {
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      if (!(distance(pts[a], pts[b]) > 0.0)) {
        throw ConfigError("node placement produced coincident nodes " + std::to_string(a) + " and " +
                          std::to_string(b));
      }
    }
  }
}

}  // namespace

std::vector<Point> place_nodes(std::size_t count, double radius, std::uint64_t seed) {
  if (count < 2) throw ConfigError("place_nodes: need at least two nodes, got " + std::to_string(count));
  if (!(radius > 0.0)) throw ConfigError("place_nodes: radius must be positive");
  std::mt19937_64 rng(seed);
  std::vector<Point> pts;
  pts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) pts.push_back(uniform_in_disk(rng, radius));
  check_distinct(pts);
  return pts;
}

std::vector<Point> place_nodes_ppp(double density, double radius, std::uint64_t seed) {
  if (!(density > 0.0)) throw ConfigError("place_nodes_ppp: density must be positive");
  std::mt19937_64 rng(seed);
  std::poisson_distribution<std::size_t> count_dist(density * std::numbers::pi * radius * radius);
  const std::size_t n = count_dist(rng);
  if (n < 2) throw ConfigError("place_nodes_ppp: realization has fewer than two nodes");
  return place_nodes(n, radius, rng());
}

RadioEnvironment make_environment(const WirelessConfig& config, std::size_t count, std::uint64_t seed) {
  if (!(config.path_loss_exponent > 2.0)) throw ConfigError("path_loss_exponent must exceed 2");
  RadioEnvironment env;
  env.positions = place_nodes(count, config.cell_radius_m, seed);
  env.cell_radius = config.cell_radius_m;
  env.path_loss_exponent = config.path_loss_exponent;
  env.tx_power_w = dbm_to_watts(config.tx_power_dbm);
  env.noise_w = dbm_to_watts(config.noise_dbm_per_hz) * config.bandwidth_hz;
  env.seed = seed;
  redraw_fading(env, config.interference, 0);
  return env;
}

void redraw_fading(RadioEnvironment& env, InterferenceMode mode, std::uint64_t epoch) {
  std::seed_seq seq{static_cast<std::uint32_t>(env.seed), static_cast<std::uint32_t>(env.seed >> 32),
                    static_cast<std::uint32_t>(epoch), static_cast<std::uint32_t>(epoch >> 32), 0xFADEu};
  std::mt19937_64 rng(seq);
  const std::size_t n = env.node_count();
  env.fading.assign(n * n, 0.0);
  for (std::size_t rx = 0; rx < n; ++rx) {
    for (std::size_t tx = 0; tx < n; ++tx) {
      if (rx != tx) env.fading[rx * n + tx] = positive_exponential(rng);
    }
  }
  env.interferers.clear();
  env.interferer_fading.clear();
  if (mode == InterferenceMode::HexRing) {
    const double ring = std::sqrt(3.0) * env.cell_radius;
    for (int k = 0; k < 6; ++k) {
      const double angle = std::numbers::pi / 6.0 + k * std::numbers::pi / 3.0;
      env.interferers.push_back(
          uniform_in_disk(rng, env.cell_radius, {ring * std::cos(angle), ring * std::sin(angle)}));
    }
    env.interferer_fading.resize(n * env.interferers.size());
    for (double& h : env.interferer_fading) h = positive_exponential(rng);
  }
}

double sinr(const RadioEnvironment& env, std::size_t tx, std::size_t rx) {
  if (tx == rx) throw ContractViolation("sinr: transmitter and receiver coincide");
  const std::size_t n = env.node_count();
  if (tx >= n || rx >= n) throw ContractViolation("sinr: node index out of range");
  const double a = env.path_loss_exponent;
  const double signal = env.tx_power_w * env.h(rx, tx) * std::pow(distance(env.positions[rx], env.positions[tx]), -a);
  double interference = 0.0;
  const std::size_t m = env.interferers.size();
  for (std::size_t x = 0; x < m; ++x) {
    interference += env.tx_power_w * env.interferer_fading[rx * m + x] *
                    std::pow(distance(env.positions[rx], env.interferers[x]), -a);
  }
  return signal / (interference + env.noise_w);
}

SinrMatrix sinr_matrix(const RadioEnvironment& env) {
  const std::size_t n = env.node_count();
  SinrMatrix s(n);
  for (std::size_t rx = 0; rx < n; ++rx) {
    for (std::size_t tx = 0; tx < n; ++tx) {
      if (rx != tx) s.at(rx, tx) = sinr(env, tx, rx);
    }
  }
  return s;
}

}  // namespace asyncdfl
