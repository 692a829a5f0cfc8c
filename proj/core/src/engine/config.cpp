#include "asyncdfl/engine/config.hpp"

#include <string>

#include "asyncdfl/errors.hpp"

namespace asyncdfl {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& why) {
  throw ConfigError(field + ": " + why);
}

}  // namespace

bool is_decentralized(Algorithm a) {
  return a == Algorithm::AsyncDFL || a == Algorithm::UniformBW || a == Algorithm::RandomBW;
}

void validate(const SimConfig& c) {
  if (is_decentralized(c.algorithm) && c.node_count < 2) {
    fail("node_count", std::string("must be at least 2 for ") + to_string(c.algorithm));
  }
  if (c.node_count < 1) fail("node_count", "must be positive");
  if (c.iteration_budget == 0) fail("iteration_budget", "must be positive");
  if (c.eta && !(*c.eta > 0.0)) fail("eta", "must be positive");
  if (c.gamma_max && *c.gamma_max < 0) fail("gamma_max", "must be non-negative");
  if (c.delay_gamma < 0) fail("delay_gamma", "must be non-negative");
  if (c.stop_epsilon < 0.0) fail("stop_epsilon", "must be non-negative");
  if (!(c.partial_fraction > 0.0 && c.partial_fraction <= 1.0)) fail("partial_fraction", "must lie in (0, 1]");
  if (c.semi_async_k > c.node_count) fail("semi_async_k", "exceeds node_count");
  if (c.local_steps == 0) fail("local_steps", "must be positive");
  if (c.probe_count < 2) fail("probe_count", "must be at least 2");
  if (!(c.probe_radius > 0.0)) fail("probe_radius", "must be positive");
  if ((c.algorithm == Algorithm::UniformBW || c.algorithm == Algorithm::RandomBW) &&
      c.channel != ChannelMode::Wireless) {
    fail("algorithm", std::string(to_string(c.algorithm)) + " needs channel = wireless");
  }
  if (c.constants) {
    const auto& k = *c.constants;
    if (!(k.L1 > 0.0 && k.L2 > 0.0 && k.L3 > 0.0)) fail("constants", "L1, L2, L3 must be positive");
    if (k.L2 > k.L3) fail("constants", "L2 must not exceed L3");
    if (k.delta < 0.0) fail("constants.delta", "must be non-negative");
  }

  const auto& w = c.wireless;
  if (!(w.cell_radius_m > 0.0)) fail("wireless.cell_radius_m", "must be positive");
  if (!(w.path_loss_exponent > 2.0)) fail("wireless.path_loss_exponent", "must exceed 2");
  if (!(w.bandwidth_hz > 0.0)) fail("wireless.bandwidth_hz", "must be positive");
  if (!(w.quant_bits_per_param > 0.0)) fail("wireless.quant_bits_per_param", "must be positive");
  if (!(w.w0_slots >= 0.0)) fail("wireless.w0_slots", "must be non-negative");
  if (!(w.training_latency_s > 0.0)) fail("wireless.training_latency_s", "must be positive");
  if (w.payload_bits && !(*w.payload_bits > 0.0)) fail("wireless.payload_bits", "must be positive");

  const auto& t = c.task;
  if (!(t.bound > 0.0)) fail("task.bound", "must be positive");
  if (t.source == DataSource::Synthetic) {
    if (t.features == 0) fail("task.features", "must be positive");
    if (t.samples == 0) fail("task.samples", "must be positive");
    if (!t.shared_targets && t.samples < c.node_count) fail("task.samples", "fewer samples than nodes");
  }
  if (t.source == DataSource::Csv && t.csv_path.empty()) fail("task.csv_path", "required for csv source");
  if (t.source == DataSource::Idx && (t.idx_images.empty() || t.idx_labels.empty())) {
    fail("task.idx_images", "idx source needs image and label paths");
  }
  if (t.loss == LossKind::Quadratic && t.source != DataSource::Synthetic) {
    fail("task.source", "quadratic tasks use synthetic targets");
  }
  if (!(t.curvature_min > 0.0) || t.curvature_max < t.curvature_min) {
    fail("task.curvature_min", "need 0 < curvature_min <= curvature_max");
  }
  if (t.loss == LossKind::CrossEntropyMlp && (t.hidden == 0 || t.classes < 2)) {
    fail("task.hidden", "MLP needs hidden > 0 and classes >= 2");
  }
  if (t.target_spread < 0.0) fail("task.target_spread", "must be non-negative");
}

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::AsyncDFL: return "AsyncDFL";
    case Algorithm::FedAvg: return "FedAvg";
    case Algorithm::FedAvgPartial: return "FedAvgPartial";
    case Algorithm::FedSemiAsync: return "FedSemiAsync";
    case Algorithm::UniformBW: return "UniformBW";
    case Algorithm::RandomBW: return "RandomBW";
  }
  return "?";
}

const char* to_string(ChannelMode m) {
  switch (m) {
    case ChannelMode::Ideal: return "ideal";
    case ChannelMode::Delay: return "delay";
    case ChannelMode::Wireless: return "wireless";
  }
  return "?";
}

Algorithm algorithm_from_string(const std::string& s) {
  for (auto a : {Algorithm::AsyncDFL, Algorithm::FedAvg, Algorithm::FedAvgPartial, Algorithm::FedSemiAsync,
                 Algorithm::UniformBW, Algorithm::RandomBW}) {
    if (s == to_string(a)) return a;
  }
  throw ConfigError("algorithm: unknown value '" + s + "'");
}

ChannelMode channel_from_string(const std::string& s) {
  for (auto m : {ChannelMode::Ideal, ChannelMode::Delay, ChannelMode::Wireless}) {
    if (s == to_string(m)) return m;
  }
  throw ConfigError("channel: unknown value '" + s + "'");
}

std::vector<LocalTask> prepare_tasks(const SimConfig& c) {
  validate(c);
  const auto& spec = c.task;
  const std::uint64_t data_seed = spec.data_seed.value_or(c.seed);
  Dataset all;
  switch (spec.source) {
    case DataSource::Synthetic:
      switch (spec.loss) {
        case LossKind::Quadratic:
          all = make_quadratic_targets(spec.samples, spec.features, spec.target_center, spec.target_spread,
                                       data_seed);
          break;
        case LossKind::Logistic:
          all = make_logistic_dataset({spec.samples, spec.features, spec.noise, true}, data_seed);
          break;
        case LossKind::CrossEntropyMlp:
          all = make_blob_dataset(spec.samples, spec.features, spec.classes, spec.noise, data_seed);
          break;
      }
      break;
    case DataSource::Csv:
      all = load_csv(spec.csv_path);
      break;
    case DataSource::Idx:
      all = load_idx(spec.idx_images, spec.idx_labels, spec.idx_limit);
      break;
  }

  std::vector<Dataset> parts;
  if (spec.shared_targets) {
    parts.assign(c.node_count, all);
  } else {
    parts = partition(all, c.node_count, spec.partition, data_seed + 1);
  }

  std::vector<LocalTask> tasks(c.node_count);
  const int classes = std::max(spec.classes, all.class_count());
  for (std::size_t i = 0; i < c.node_count; ++i) {
    auto& t = tasks[i];
    t.data = std::move(parts[i]);
    t.loss = spec.loss;
    t.regularizer = {spec.regularizer, spec.bound};
    t.mlp = {spec.hidden, classes};
    const double frac = c.node_count > 1 ? static_cast<double>(i) / static_cast<double>(c.node_count - 1) : 0.0;
    t.curvature = spec.curvature_min + (spec.curvature_max - spec.curvature_min) * frac;
  }
  assign_fractions_by_size(tasks);
  for (const auto& t : tasks) validate_task(t);
  validate_fractions(tasks);
  return tasks;
}

}  // namespace asyncdfl
