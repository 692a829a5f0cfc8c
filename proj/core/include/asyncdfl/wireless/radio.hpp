#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace asyncdfl {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(Point a, Point b);

// Square matrix indexed (rx, tx). Diagonal entries are unused.
class SinrMatrix {
 public:
  SinrMatrix() = default;
  explicit SinrMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}
  SinrMatrix(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t size() const noexcept { return n_; }
  double at(std::size_t rx, std::size_t tx) const { return data_[rx * n_ + tx]; }
  double& at(std::size_t rx, std::size_t tx) { return data_[rx * n_ + tx]; }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

enum class InterferenceMode { SingleCell, HexRing };

struct WirelessConfig {
  double cell_radius_m = 500.0;
  double path_loss_exponent = 4.0;
  double bandwidth_hz = 1e7;
  double tx_power_dbm = 30.0;
  double noise_dbm_per_hz = -174.0;
  double quant_bits_per_param = 16.0;
  double gamma_db = 0.0;
  double w0_slots = 1.0;
  double training_latency_s = 1.0;           // T
  std::optional<double> payload_bits;        // S override; default dim * quant bits
  InterferenceMode interference = InterferenceMode::SingleCell;

  friend bool operator==(const WirelessConfig&, const WirelessConfig&) = default;
};

double db_to_linear(double db);
double dbm_to_watts(double dbm);

struct RadioEnvironment {
  std::vector<Point> positions;
  double cell_radius = 500.0;
  double path_loss_exponent = 4.0;
  double tx_power_w = 1.0;
  double noise_w = 0.0;
  std::vector<double> fading;               // (rx, tx), node_count^2
  std::vector<Point> interferers;           // co-channel transmitters in other cells
  std::vector<double> interferer_fading;    // (rx, interferer)
  std::uint64_t seed = 0;

  std::size_t node_count() const noexcept { return positions.size(); }
  double h(std::size_t rx, std::size_t tx) const { return fading[rx * node_count() + tx]; }
};

// count i.i.d. points uniform in the disk of the given radius.
std::vector<Point> place_nodes(std::size_t count, double radius, std::uint64_t seed);

// Poisson point process of the given density (nodes per square meter).
std::vector<Point> place_nodes_ppp(double density, double radius, std::uint64_t seed);

// Positions from place_nodes, powers and noise from config, one fading draw.
RadioEnvironment make_environment(const WirelessConfig& config, std::size_t count, std::uint64_t seed);

// New Exp(1) fading for every link (and new interferer positions in HexRing
// mode), drawn from an RNG keyed by (seed, epoch).
void redraw_fading(RadioEnvironment& env, InterferenceMode mode, std::uint64_t epoch);

double sinr(const RadioEnvironment& env, std::size_t tx, std::size_t rx);

SinrMatrix sinr_matrix(const RadioEnvironment& env);

}  // namespace asyncdfl
