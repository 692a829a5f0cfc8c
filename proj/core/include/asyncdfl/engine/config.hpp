#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "asyncdfl/learning/dataset.hpp"
#include "asyncdfl/learning/loss.hpp"
#include "asyncdfl/wireless/radio.hpp"

namespace asyncdfl {

enum class Algorithm { AsyncDFL, FedAvg, FedAvgPartial, FedSemiAsync, UniformBW, RandomBW };

// Ideal: zero-delay synchronous exchange. Delay: random per-link delays
// bounded by the configured gamma. Wireless: schedule and durations from the
// radio model.
enum class ChannelMode { Ideal, Delay, Wireless };

enum class DataSource { Synthetic, Csv, Idx };

struct TaskSpec {
  LossKind loss = LossKind::Logistic;
  PartitionMode partition = PartitionMode::UniformIid;
  DataSource source = DataSource::Synthetic;
  std::optional<std::uint64_t> data_seed;  // defaults to the run seed

  // Synthetic data.
  std::size_t samples = 600;
  std::size_t features = 10;
  int classes = 3;       // MLP blobs
  double noise = 0.5;    // logistic logit noise, blob spread

  // External data.
  std::string csv_path;
  std::string idx_images;
  std::string idx_labels;
  std::size_t idx_limit = 0;

  RegularizerKind regularizer = RegularizerKind::L2;
  double bound = 1e6;
  std::size_t hidden = 32;

  // Quadratic targets ~ N(target_center, target_spread^2) in dim features.
  // With shared_targets every node holds the same targets, so all local
  // minimizers coincide. Curvatures are spread linearly over the nodes.
  double target_center = 1.0;
  double target_spread = 0.5;
  bool shared_targets = false;
  double curvature_min = 1.0;
  double curvature_max = 1.0;

  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

struct ConstantsOverride {
  double L1 = 1.0;
  double L2 = 1.0;
  double L3 = 1.0;
  double delta = 0.0;
  friend bool operator==(const ConstantsOverride&, const ConstantsOverride&) = default;
};

struct SimConfig {
  std::size_t node_count = 5;
  std::size_t iteration_budget = 1000;
  std::uint64_t seed = 0;
  std::optional<double> eta;               // default: window midpoint, 0.016 for the MLP
  // Staleness bound checked at every read after warm-up. nullopt picks a
  // default per channel: 1 for ideal, delay_gamma for delay, none for wireless.
  std::optional<std::int64_t> gamma_max;
  bool observe_gamma = false;              // count violations instead of aborting
  ChannelMode channel = ChannelMode::Delay;
  std::int64_t delay_gamma = 5;
  WirelessConfig wireless;
  TaskSpec task;
  Algorithm algorithm = Algorithm::AsyncDFL;
  double stop_epsilon = 0.0;               // 0 disables the early stop
  double partial_fraction = 0.5;
  std::size_t semi_async_k = 0;            // 0: half the nodes, rounded up
  std::size_t local_steps = 1;
  bool strict_eta = false;
  bool sparse_payload = false;
  std::optional<ConstantsOverride> constants;
  std::size_t probe_count = 8;
  double probe_radius = 1.0;
  std::string dump_path;
  std::string replay_path;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

bool is_decentralized(Algorithm a);

// Throws ConfigError naming the offending field.
void validate(const SimConfig& config);

const char* to_string(Algorithm a);
const char* to_string(ChannelMode m);
Algorithm algorithm_from_string(const std::string& s);
ChannelMode channel_from_string(const std::string& s);

// Builds per-node tasks: data generation or loading, partitioning, fractions.
std::vector<LocalTask> prepare_tasks(const SimConfig& config);

}  // namespace asyncdfl
