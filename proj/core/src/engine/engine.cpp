#include "asyncdfl/engine/engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

#include "asyncdfl/analysis/theory.hpp"
#include "asyncdfl/errors.hpp"
#include "asyncdfl/protocol/node_state.hpp"
#include "asyncdfl/protocol/wire.hpp"
#include "asyncdfl/wireless/schedule.hpp"

namespace asyncdfl {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

std::mt19937_64 stream(std::uint64_t seed, std::uint32_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), salt};
  return std::mt19937_64(seq);
}

ParameterVector weighted_mean(const std::vector<NodeState>& nodes, std::span<const double> alpha) {
  ParameterVector w(nodes.front().w.dim());
  for (std::size_t i = 0; i < nodes.size(); ++i) w.axpy(alpha[i], nodes[i].w);
  return w;
}

std::uint64_t read_bound(const SimConfig& c) {
  switch (c.channel) {
    case ChannelMode::Ideal: return 0;
    case ChannelMode::Delay: return c.delay_gamma <= 1 ? 0 : static_cast<std::uint64_t>(c.delay_gamma);
    case ChannelMode::Wireless: return 0;
  }
  return 0;
}

struct Setup {
  std::vector<LocalTask> tasks;
  std::vector<double> alpha;
  ParameterVector w0;
  SmoothnessConstants constants;
  double eta = 0.0;
  bool heuristic = false;
};

Setup prepare(const SimConfig& c) {
  Setup s;
  s.tasks = prepare_tasks(c);
  s.alpha = fractions_of(s.tasks);
  s.w0 = initial_point(s.tasks.front(), c.seed ^ 0x1417ULL);

  bool quadratic = true;
  for (const auto& t : s.tasks) quadratic = quadratic && t.loss == LossKind::Quadratic;
  s.heuristic = !quadratic;
  if (c.constants) {
    s.constants = {c.constants->L1, c.constants->L2, c.constants->L3, c.constants->delta};
  } else {
    ProbeSpec probes;
    probes.count = c.probe_count;
    probes.radius = c.probe_radius;
    probes.center = s.w0;
    probes.eta = c.eta.value_or(1e-2);
    probes.seed = c.seed ^ 0x9E3779B97F4A7C15ULL;
    s.constants = estimate_constants(s.tasks, probes);
  }

  const EtaWindow window = eta_window(s.constants, c.node_count);
  if (c.eta) {
    s.eta = *c.eta;
  } else if (c.task.loss == LossKind::CrossEntropyMlp) {
    s.eta = 0.016;
  } else if (!window.empty()) {
    s.eta = window.midpoint();
  } else {
    throw ConfigError("eta: learning-rate window is empty for the estimated constants; set eta explicitly");
  }
  if (c.strict_eta && !window.contains(s.eta)) {
    throw ConfigError("eta: " + std::to_string(s.eta) + " lies outside the window (" +
                      std::to_string(window.lower) + ", " + std::to_string(window.upper) + ")");
  }
  return s;
}

void fill_bound(std::vector<TraceRecord>& records, RunSummary& summary, double initial_loss, std::size_t nodes,
                std::int64_t gamma) {
  std::vector<double> losses, grads;
  for (const auto& r : records) {
    losses.push_back(r.global_loss);
    grads.push_back(r.grad_norm_sq);
  }
  const double u = u_of_eta(summary.constants, nodes, summary.eta, static_cast<double>(gamma));
  const BoundTrace trace = bound_trace(initial_loss, losses, grads, summary.eta, u);
  for (std::size_t t = 0; t < records.size(); ++t) {
    records[t].bound_U = trace.rows[t].bound;
    records[t].u_eta = u;
  }
  summary.gamma_bound = gamma;
  summary.bound_vacuous = trace.vacuous;
  summary.bound_violations = trace.violations;
}

class AsyncSimulation {
 public:
  AsyncSimulation(const SimConfig& config, const SlotObserver& observer)
      : cfg_(config),
        observer_(observer),
        setup_(prepare(config)),
        n_(config.node_count),
        delay_rng_(stream(config.seed, 0xDE1Au)),
        alloc_rng_(stream(config.seed, 0xA110Cu)) {
    for (NodeId i = 0; i < n_; ++i) nodes_.push_back(make_node_state(i, n_, setup_.w0));
    // Every node starts holding w_j(0) with stamp 0.
    for (auto& node : nodes_) {
      for (NodeId j = 0; j < n_; ++j) {
        if (j == node.id) continue;
        node.latest_received[j] = StampedParameter{j, 0, setup_.w0};
        node.received[j] = true;
        node.scheduled[j] = true;
      }
      node.has_receivers = true;
    }
    inflight_.resize(n_ * n_);

    if (cfg_.gamma_max) {
      check_gamma_ = *cfg_.gamma_max;
    } else if (cfg_.channel == ChannelMode::Ideal) {
      check_gamma_ = 1;
    } else if (cfg_.channel == ChannelMode::Delay) {
      check_gamma_ = std::max<std::int64_t>(cfg_.delay_gamma, 1);
    }
    if (check_gamma_) check_gamma_ = std::max<std::int64_t>(*check_gamma_, 1);

    if (cfg_.channel == ChannelMode::Wireless) env_ = make_environment(cfg_.wireless, n_, cfg_.seed);

    if (!cfg_.replay_path.empty()) {
      std::ifstream in(cfg_.replay_path, std::ios::binary);
      if (!in) throw ConfigError("replay_path: cannot open " + cfg_.replay_path);
      wire::Dump dump = wire::read_dump(in);
      if (dump.node_count != n_) throw ConfigError("replay_path: dump has a different node count");
      for (auto& e : dump.events) replay_[e.slot].push_back(std::move(e));
      replaying_ = true;
    }

    switch (cfg_.algorithm) {
      case Algorithm::UniformBW: policy_ = AllocationPolicy::Uniform; break;
      case Algorithm::RandomBW: policy_ = AllocationPolicy::Random; break;
      default: policy_ = AllocationPolicy::Optimal; break;
    }
  }

  RunResult execute() {
    RunResult result;
    auto& summary = result.summary;
    summary.eta = setup_.eta;
    summary.constants = setup_.constants;
    summary.bound_heuristic = setup_.heuristic;
    summary.simplified_baseline = cfg_.algorithm != Algorithm::AsyncDFL;

    const double initial_loss = global_loss(setup_.tasks, setup_.w0);
    std::vector<LocalStep> steps(n_);
    std::uint64_t realized_max = 0;

    for (std::uint64_t t = 0; t < cfg_.iteration_budget; ++t) {
      // Reads at iteration t.
      std::uint64_t staleness = 0;
      for (const auto& node : nodes_) {
        const auto s = max_staleness(node);
        if (!s) throw ProtocolStateError("node " + std::to_string(node.id) + " has an empty mailbox slot");
        staleness = std::max(staleness, *s);
        if (check_gamma_ && static_cast<std::int64_t>(t) >= *check_gamma_ &&
            !check_staleness(node, *check_gamma_)) {
          if (!cfg_.observe_gamma) {
            throw StalenessViolation("node " + std::to_string(node.id) + " at iteration " + std::to_string(t) +
                                     " reads a copy " + std::to_string(*s) +
                                     " iterations old; bound is " + std::to_string(*check_gamma_));
          }
          ++summary.staleness_violations;
        }
      }
      realized_max = std::max(realized_max, staleness);

      // Learn against the slot-start snapshot, then commit.
      const ParameterVector w_before = weighted_mean(nodes_, setup_.alpha);
      TraceRecord rec;
      rec.slot = t;
      rec.iteration = t;
      rec.algorithm = cfg_.algorithm;
      for (NodeId i = 0; i < n_; ++i) steps[i] = compute_local_step(nodes_[i], setup_.tasks[i], setup_.alpha, setup_.eta);
      for (NodeId i = 0; i < n_; ++i) {
        rec.consensus_max = std::max(rec.consensus_max, distance(w_before, steps[i].aggregated));
        for (NodeId j = 0; j < n_; ++j) {
          if (j == i) continue;
          const auto& held = nodes_[j].latest_received[i];
          rec.consensus_copies = std::max(rec.consensus_copies, distance(nodes_[i].w, held->payload));
        }
        rec.grad_norm_sq += steps[i].direction.norm_sq();
      }
      bool all_below = cfg_.stop_epsilon > 0.0;
      if (all_below) {
        for (NodeId i = 0; i < n_; ++i) {
          all_below = all_below && local_loss(setup_.tasks[i], steps[i].aggregated) <= cfg_.stop_epsilon;
        }
      }
      for (NodeId i = 0; i < n_; ++i) {
        nodes_[i].w = std::move(steps[i].next);
        nodes_[i].t = t + 1;
      }

      if (observer_) observer_(t, nodes_);
      const ParameterVector w_after = weighted_mean(nodes_, setup_.alpha);
      rec.global_loss = global_loss(setup_.tasks, w_after);
      rec.accuracy = global_accuracy(setup_.tasks, w_after).value_or(kNaN);
      rec.gamma_realized = staleness + 1;

      deliver_arrivals(t);
      transmit(t, summary);
      deliver_arrivals(t);

      if (cfg_.channel == ChannelMode::Wireless) {
        rec.scheduled_count = outcome_.schedule.scheduled.size();
        double bmin = kNaN;
        for (std::size_t i : outcome_.schedule.scheduled) {
          bmin = std::isnan(bmin) ? outcome_.bandwidths[i] : std::min(bmin, outcome_.bandwidths[i]);
        }
        rec.bandwidth_min = bmin;
      } else {
        rec.scheduled_count = n_;
        rec.bandwidth_min = kNaN;
      }
      result.records.push_back(rec);
      if (all_below) {
        summary.stopped_early = true;
        break;
      }
    }

    summary.max_staleness = realized_max;
    summary.epochs = epochs_;
    summary.mean_epoch_gamma = epochs_ > 0 ? gamma_sum_ / static_cast<double>(epochs_) : 0.0;
    counts_.in_flight_at_end = 0;
    for (const auto& m : inflight_) counts_.in_flight_at_end += m ? 1 : 0;
    summary.messages = counts_;
    if (!replaying_) {
      const auto accounted = counts_.delivered + counts_.duplicates + counts_.dropped_stale + counts_.superseded +
                             counts_.in_flight_at_end;
      if (accounted != counts_.enqueued) {
        throw std::logic_error("message conservation failed: " + std::to_string(counts_.enqueued) +
                               " enqueued, " + std::to_string(accounted) + " accounted");
      }
    }

    std::int64_t gamma = static_cast<std::int64_t>(read_bound(cfg_));
    if (cfg_.channel == ChannelMode::Wireless) {
      gamma = cfg_.gamma_max.value_or(static_cast<std::int64_t>(realized_max + 1));
    }
    fill_bound(result.records, summary, initial_loss, n_, gamma);

    if (!cfg_.dump_path.empty()) {
      std::ofstream out(cfg_.dump_path, std::ios::binary);
      if (!out) throw ConfigError("dump_path: cannot write " + cfg_.dump_path);
      wire::write_dump(out, static_cast<std::uint32_t>(n_), dump_);
    }
    return result;
  }

 private:
  struct InFlight {
    std::uint64_t departure = 0;
    std::uint64_t arrival = 0;  // first iteration that may read the payload
    StampedParameter message;
  };

  void apply(std::uint64_t t, NodeId receiver, const StampedParameter& msg) {
    switch (deliver_into(nodes_[receiver], msg)) {
      case DeliveryStatus::Accepted: ++counts_.delivered; break;
      case DeliveryStatus::Duplicate: ++counts_.duplicates; break;
      case DeliveryStatus::DroppedStale: ++counts_.dropped_stale; break;
    }
    if (!cfg_.dump_path.empty()) dump_.push_back({t, receiver, msg});
  }

  void deliver_arrivals(std::uint64_t t) {
    if (replaying_) {
      const auto it = replay_.find(t);
      if (it == replay_.end()) return;
      for (const auto& e : it->second) apply(t, e.receiver, e.message);
      replay_.erase(it);
      return;
    }
    for (NodeId rx = 0; rx < n_; ++rx) {
      for (NodeId tx = 0; tx < n_; ++tx) {
        auto& slot = inflight_[rx * n_ + tx];
        if (slot && slot->arrival <= t + 1) {
          apply(t, rx, slot->message);
          slot.reset();
        }
      }
    }
  }

  void enqueue(std::uint64_t t, NodeId tx, NodeId rx, std::uint64_t delay) {
    auto& slot = inflight_[rx * n_ + tx];
    if (slot) ++counts_.superseded;
    slot = InFlight{t, t + 1 + delay, StampedParameter{tx, t + 1, nodes_[tx].w}};
    ++counts_.enqueued;
  }

  void transmit(std::uint64_t t, RunSummary& summary) {
    switch (cfg_.channel) {
      case ChannelMode::Ideal:
        for (NodeId i = 0; i < n_; ++i) {
          for (NodeId j = 0; j < n_; ++j) {
            if (j != i) enqueue(t, i, j, 0);
          }
          nodes_[i].t_s = t + 1;
        }
        break;
      case ChannelMode::Delay: {
        const std::int64_t bound = cfg_.delay_gamma <= 1 ? 0 : cfg_.delay_gamma / 2;
        std::uniform_int_distribution<std::int64_t> draw(1, std::max<std::int64_t>(bound, 1));
        for (NodeId i = 0; i < n_; ++i) {
          // Node i learns through feedback whether each receiver holds its
          // last payload, and starts a new epoch once all of them do.
          bool gate = true;
          for (NodeId j = 0; j < n_; ++j) gate = gate && (j == i || nodes_[j].received[i]);
          if (!gate) continue;
          for (NodeId j = 0; j < n_; ++j) {
            if (j == i) continue;
            nodes_[j].received[i] = false;
            enqueue(t, i, j, bound == 0 ? 0 : static_cast<std::uint64_t>(draw(delay_rng_)));
          }
          nodes_[i].t_s = t + 1;
        }
        break;
      }
      case ChannelMode::Wireless:
        if (t + 1 >= next_epoch_) start_epoch(t, summary);
        break;
    }
  }

  void start_epoch(std::uint64_t t, RunSummary& summary) {
    redraw_fading(env_, cfg_.wireless.interference, epochs_);
    const SinrMatrix sinr = sinr_matrix(env_);
    double q = 1.0;
    if (cfg_.sparse_payload) {
      q = 0.0;
      for (const auto& node : nodes_) {
        const auto nnz = std::count_if(node.w.begin(), node.w.end(), [](double v) { return v != 0.0; });
        q = std::max(q, static_cast<double>(nnz) / static_cast<double>(node.w.dim()));
      }
      q = std::max(q, 1.0 / static_cast<double>(setup_.w0.dim()));
    }
    const double bits = cfg_.wireless.payload_bits.value_or(static_cast<double>(setup_.w0.dim()) *
                                                             cfg_.wireless.quant_bits_per_param);
    outcome_ = plan_epoch(sinr, cfg_.wireless, q, bits, policy_, alloc_rng_);

    if (outcome_.schedule.scheduled.empty()) {
      ++summary.empty_schedules;
    } else {
      double total = 0.0;
      for (std::size_t i : outcome_.schedule.scheduled) total += outcome_.bandwidths[i];
      if (std::abs(total - cfg_.wireless.bandwidth_hz) > 1e-9 * cfg_.wireless.bandwidth_hz) {
        ++summary.bandwidth_violations;
      }
      if (policy_ != AllocationPolicy::Optimal) {
        const Allocation best = allocate_bandwidth(outcome_.schedule, sinr, cfg_.wireless.bandwidth_hz);
        const double gap = min_rate_objective(best.schedule, sinr, best.bandwidths) - outcome_.objective;
        summary.min_objective_gap = epochs_ == 0 ? gap : std::min(summary.min_objective_gap, gap);
      }
    }

    for (NodeId i = 0; i < n_; ++i) {
      auto& node = nodes_[i];
      std::fill(node.received.begin(), node.received.end(), false);
      std::fill(node.scheduled.begin(), node.scheduled.end(), false);
      node.has_receivers = !outcome_.schedule.receivers[i].empty();
      node.t_s = t + 1;
    }
    for (std::size_t i : outcome_.schedule.scheduled) {
      for (std::size_t j : outcome_.schedule.receivers[i]) {
        nodes_[j].scheduled[i] = true;
        const std::uint64_t d = outcome_.gamma_w + outcome_.durations.slots.at({j, i});
        enqueue(t, static_cast<NodeId>(i), static_cast<NodeId>(j), d);
      }
    }
    gamma_sum_ += static_cast<double>(outcome_.gamma);
    ++epochs_;
    next_epoch_ = t + 1 + std::max<std::uint64_t>(outcome_.gamma, 1);
  }

  const SimConfig& cfg_;
  const SlotObserver& observer_;
  Setup setup_;
  std::size_t n_;
  std::vector<NodeState> nodes_;
  std::vector<std::optional<InFlight>> inflight_;
  MessageCounts counts_;
  std::optional<std::int64_t> check_gamma_;
  std::mt19937_64 delay_rng_;
  std::mt19937_64 alloc_rng_;
  RadioEnvironment env_;
  ScheduleOutcome outcome_;
  AllocationPolicy policy_ = AllocationPolicy::Optimal;
  std::uint64_t next_epoch_ = 0;
  std::size_t epochs_ = 0;
  double gamma_sum_ = 0.0;
  std::vector<wire::DeliveryEvent> dump_;
  std::map<std::uint64_t, std::vector<wire::DeliveryEvent>> replay_;
  bool replaying_ = false;
};

}  // namespace

bool operator==(const TraceRecord& a, const TraceRecord& b) {
  return a.slot == b.slot && a.iteration == b.iteration && a.algorithm == b.algorithm &&
         same_bits(a.global_loss, b.global_loss) && same_bits(a.bound_U, b.bound_U) && same_bits(a.u_eta, b.u_eta) &&
         same_bits(a.grad_norm_sq, b.grad_norm_sq) && same_bits(a.consensus_max, b.consensus_max) &&
         same_bits(a.consensus_copies, b.consensus_copies) && same_bits(a.accuracy, b.accuracy) &&
         a.gamma_realized == b.gamma_realized && same_bits(a.bandwidth_min, b.bandwidth_min) &&
         a.scheduled_count == b.scheduled_count;
}

RunResult run(const SimConfig& config, const SlotObserver& observer) {
  validate(config);
  if (!is_decentralized(config.algorithm)) {
    throw ConfigError(std::string("algorithm: run() handles decentralized algorithms, got ") +
                      to_string(config.algorithm));
  }
  AsyncSimulation sim(config, observer);
  return sim.execute();
}

RunResult run_fedavg(const SimConfig& config) {
  validate(config);
  if (is_decentralized(config.algorithm)) {
    throw ConfigError(std::string("algorithm: run_fedavg() handles server baselines, got ") +
                      to_string(config.algorithm));
  }
  Setup setup = prepare(config);
  const std::size_t n = config.node_count;
  RunResult result;
  auto& summary = result.summary;
  summary.eta = setup.eta;
  summary.constants = setup.constants;
  summary.bound_heuristic = setup.heuristic;
  summary.simplified_baseline = config.algorithm != Algorithm::FedAvg;
  summary.bound_vacuous = true;

  std::mt19937_64 rng = stream(config.seed, 0xFEDu);
  const std::int64_t delay_cap = config.delay_gamma <= 1 ? 1 : config.delay_gamma / 2;
  std::uniform_int_distribution<std::int64_t> latency(1, delay_cap);
  const std::size_t k_fast = config.semi_async_k > 0 ? config.semi_async_k : (n + 1) / 2;

  ParameterVector w = setup.w0;
  std::vector<ParameterVector> local(n);
  std::vector<bool> buffered(n, false);
  std::vector<ParameterVector> buffer(n);
  std::uint64_t slot = 0;

  auto local_train = [&](std::size_t i) {
    ParameterVector x = w;
    for (std::size_t s = 0; s < config.local_steps; ++s) {
      ParameterVector step = x;
      step.axpy(-setup.eta, loss_gradient(setup.tasks[i], x));
      x = project(setup.tasks[i].regularizer, step);
    }
    return x;
  };

  for (std::uint64_t t = 0; t < config.iteration_budget; ++t) {
    std::vector<std::size_t> chosen;
    std::uint64_t round_slots = 1;
    switch (config.algorithm) {
      case Algorithm::FedAvgPartial: {
        const auto take = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::llround(config.partial_fraction * static_cast<double>(n))));
        if (take >= n) {
          chosen.resize(n);
          std::iota(chosen.begin(), chosen.end(), std::size_t{0});
        } else {
          std::vector<std::size_t> order(n);
          std::iota(order.begin(), order.end(), std::size_t{0});
          std::shuffle(order.begin(), order.end(), rng);
          chosen.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take));
          std::sort(chosen.begin(), chosen.end());
        }
        break;
      }
      case Algorithm::FedSemiAsync: {
        std::vector<std::pair<std::int64_t, std::size_t>> arrivals;
        for (std::size_t i = 0; i < n; ++i) {
          const std::int64_t l = config.channel == ChannelMode::Ideal ? 1 : latency(rng);
          arrivals.emplace_back(l, i);
        }
        std::stable_sort(arrivals.begin(), arrivals.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t k = 0; k < k_fast; ++k) chosen.push_back(arrivals[k].second);
        round_slots = static_cast<std::uint64_t>(arrivals[k_fast - 1].first);
        std::sort(chosen.begin(), chosen.end());
        break;
      }
      default:
        chosen.resize(n);
        std::iota(chosen.begin(), chosen.end(), std::size_t{0});
        break;
    }

    for (std::size_t i : chosen) local[i] = local_train(i);

    // Stragglers in the semi-asynchronous variant contribute one round late.
    std::vector<std::pair<std::size_t, const ParameterVector*>> parts;
    std::vector<bool> fresh(n, false);
    for (std::size_t i : chosen) fresh[i] = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (fresh[i]) {
        parts.emplace_back(i, &local[i]);
      } else if (buffered[i]) {
        parts.emplace_back(i, &buffer[i]);
      }
    }
    double weight = 0.0;
    for (const auto& [i, _] : parts) weight += setup.alpha[i];
    ParameterVector next(w.dim());
    for (const auto& [i, x] : parts) next.axpy(setup.alpha[i] / weight, *x);

    if (config.algorithm == Algorithm::FedSemiAsync) {
      std::fill(buffered.begin(), buffered.end(), false);
      for (std::size_t i = 0; i < n; ++i) {
        if (!fresh[i]) {
          buffer[i] = local_train(i);
          buffered[i] = true;
        }
      }
    }

    TraceRecord rec;
    rec.slot = slot;
    rec.iteration = t;
    rec.algorithm = config.algorithm;
    ParameterVector move = next - w;
    rec.grad_norm_sq = move.norm_sq() / (setup.eta * setup.eta);
    w = std::move(next);
    rec.global_loss = global_loss(setup.tasks, w);
    rec.accuracy = global_accuracy(setup.tasks, w).value_or(kNaN);
    rec.bound_U = kNaN;
    rec.u_eta = kNaN;
    rec.gamma_realized = config.algorithm == Algorithm::FedSemiAsync ? 2 : 1;
    rec.bandwidth_min = kNaN;
    rec.scheduled_count = chosen.size();
    result.records.push_back(rec);
    slot += round_slots;

    if (config.stop_epsilon > 0.0) {
      bool below = true;
      for (const auto& task : setup.tasks) below = below && local_loss(task, w) <= config.stop_epsilon;
      if (below) {
        summary.stopped_early = true;
        break;
      }
    }
  }
  return result;
}

RunResult run_any(const SimConfig& config) {
  return is_decentralized(config.algorithm) ? run(config) : run_fedavg(config);
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& records) {
  out << kTraceHeader << '\n';
  char buf[64];
  auto num = [&](double v) -> const char* {
    if (std::isnan(v)) return "nan";
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  };
  for (const auto& r : records) {
    out << r.slot << ',' << r.iteration << ',' << to_string(r.algorithm) << ',';
    out << num(r.global_loss) << ',';
    out << num(r.bound_U) << ',';
    out << num(r.u_eta) << ',';
    out << num(r.grad_norm_sq) << ',';
    out << num(r.consensus_max) << ',';
    out << num(r.accuracy) << ',';
    out << r.gamma_realized << ',';
    out << num(r.bandwidth_min) << ',';
    out << r.scheduled_count << '\n';
  }
}

}  // namespace asyncdfl
