#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "asyncdfl/learning/loss.hpp"
#include "asyncdfl/learning/parameter_vector.hpp"

namespace asyncdfl {

using NodeId = std::uint32_t;

struct StampedParameter {
  NodeId sender = 0;
  std::uint64_t stamp = 0;  // tau: the sender's iteration when it sent the payload
  ParameterVector payload;

  friend bool operator==(const StampedParameter&, const StampedParameter&) = default;
};

// One node's protocol state. Per-sender containers are indexed by node id;
// the entry for the node itself is unused because its own w is always current.
struct NodeState {
  NodeId id = 0;
  ParameterVector w;
  std::vector<std::optional<StampedParameter>> latest_received;
  std::vector<bool> received;   // J flags
  std::vector<bool> scheduled;  // Q flags
  bool has_receivers = false;   // Y flag
  std::uint64_t t = 0;
  std::uint64_t t_s = 0;

  std::size_t node_count() const noexcept { return latest_received.size(); }
};

// Fresh state for node `id` in a network of `node_count` nodes with an empty mailbox.
NodeState make_node_state(NodeId id, std::size_t node_count, ParameterVector w0);

// (1 / (1 - alpha_i)) * sum_{j != i} alpha_j w_j(tau_ij)
ParameterVector shared_parameter(const NodeState& state, std::span<const double> fractions);

// v_i = sum_j alpha_j w_j(tau_ij), with the node's own current w.
ParameterVector aggregate(const NodeState& state, std::span<const double> fractions);

struct LocalStep {
  ParameterVector aggregated;  // v_i
  ParameterVector gradient;    // alpha_i grad F_i(v_i)
  ParameterVector direction;   // s_i
  ParameterVector next;        // [w_i - eta * gradient]^+
};

LocalStep compute_local_step(const NodeState& state, const LocalTask& task,
                             std::span<const double> fractions, double eta);

// Applies one projected-gradient step and advances t.
NodeState local_update(const NodeState& state, const LocalTask& task,
                       std::span<const double> fractions, double eta);

enum class DeliveryStatus { Accepted, Duplicate, DroppedStale };

// In place. Older stamps than the held copy are dropped with a warning.
DeliveryStatus deliver_into(NodeState& state, const StampedParameter& msg);

NodeState deliver(const NodeState& state, const StampedParameter& msg);

// max(t - gamma, 0) < tau_ij <= t for every other sender. Missing entries fail.
bool check_staleness(const NodeState& state, std::int64_t gamma);

// Largest t - tau_ij over held copies; nullopt if any sender is missing.
std::optional<std::uint64_t> max_staleness(const NodeState& state);

}  // namespace asyncdfl
