#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "asyncdfl/engine/config.hpp"
#include "asyncdfl/learning/loss.hpp"
#include "asyncdfl/protocol/node_state.hpp"

namespace asyncdfl {

struct TraceRecord {
  std::uint64_t slot = 0;
  std::uint64_t iteration = 0;
  Algorithm algorithm = Algorithm::AsyncDFL;
  double global_loss = 0.0;      // F-bar(w(t+1))
  double bound_U = 0.0;          // NaN when not applicable
  double u_eta = 0.0;
  double grad_norm_sq = 0.0;     // ||g(t)||^2
  double consensus_max = 0.0;    // max_i ||w(t) - v_i(t)||
  double consensus_copies = 0.0; // max_{i,j} ||w_i(t) - w_i(tau_ji(t))||
  double accuracy = 0.0;         // NaN for quadratic tasks
  std::uint64_t gamma_realized = 0;
  double bandwidth_min = 0.0;    // NaN outside wireless mode
  std::size_t scheduled_count = 0;

  friend bool operator==(const TraceRecord&, const TraceRecord&);
};

struct MessageCounts {
  std::uint64_t enqueued = 0;
  std::uint64_t delivered = 0;
  std::uint64_t duplicates = 0;
  std::uint64_t dropped_stale = 0;
  std::uint64_t superseded = 0;
  std::uint64_t in_flight_at_end = 0;
};

struct RunSummary {
  double eta = 0.0;
  SmoothnessConstants constants;
  bool bound_heuristic = false;   // constants were estimated on a non-quadratic task
  bool bound_vacuous = false;
  std::int64_t gamma_bound = 0;   // gamma used in u(eta)
  std::size_t bound_violations = 0;
  std::uint64_t max_staleness = 0;
  std::size_t staleness_violations = 0;  // observe mode only
  std::size_t epochs = 0;
  double mean_epoch_gamma = 0.0;  // mean Gamma_W + Gamma_T over wireless epochs
  std::size_t empty_schedules = 0;
  double min_objective_gap = 0.0; // min over epochs of optimal minus used allocation objective
  std::size_t bandwidth_violations = 0;
  bool stopped_early = false;
  bool simplified_baseline = false;
  MessageCounts messages;
};

struct RunResult {
  std::vector<TraceRecord> records;
  RunSummary summary;
};

// Called after the learning step of every slot with the committed node states.
using SlotObserver = std::function<void(std::uint64_t slot, std::span<const NodeState> nodes)>;

// Decentralized algorithms (AsyncDFL, UniformBW, RandomBW).
RunResult run(const SimConfig& config, const SlotObserver& observer = {});

// FedAvg and its simplified variants.
RunResult run_fedavg(const SimConfig& config);

// Dispatches on config.algorithm.
RunResult run_any(const SimConfig& config);

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& records);

inline constexpr const char* kTraceHeader =
    "slot,iteration,algorithm,global_loss,bound_U,u_eta,grad_norm_sq,consensus_max,accuracy,"
    "gamma_realized,bandwidth_min,scheduled_count";

}  // namespace asyncdfl
