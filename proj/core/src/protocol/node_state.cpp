#include "asyncdfl/protocol/node_state.hpp"

#include <algorithm>
#include <string>

#include "asyncdfl/errors.hpp"
#include "asyncdfl/log.hpp"

namespace asyncdfl {

namespace {

void check_fractions(const NodeState& state, std::span<const double> fractions) {
  if (fractions.size() != state.node_count()) {
    throw ContractViolation("fraction count " + std::to_string(fractions.size()) +
                            " does not match node count " + std::to_string(state.node_count()));
  }
  if (state.id >= state.node_count()) throw ContractViolation("node id out of range");
}

const StampedParameter& held_copy(const NodeState& state, NodeId j) {
  const auto& entry = state.latest_received[j];
  if (!entry) {
    throw ProtocolStateError("node " + std::to_string(state.id) + " holds no parameter from node " +
                             std::to_string(j));
  }
  return *entry;
}

}  // namespace

NodeState make_node_state(NodeId id, std::size_t node_count, ParameterVector w0) {
  if (id >= node_count) throw ContractViolation("make_node_state: id out of range");
  NodeState s;
  s.id = id;
  s.w = std::move(w0);
  s.latest_received.resize(node_count);
  s.received.assign(node_count, false);
  s.scheduled.assign(node_count, false);
  return s;
}

ParameterVector shared_parameter(const NodeState& state, std::span<const double> fractions) {
  check_fractions(state, fractions);
  const double own = fractions[state.id];
  if (!(own < 1.0)) throw DegenerateTopology("shared parameter undefined when alpha_i = 1");
  ParameterVector sum(state.w.dim());
  for (NodeId j = 0; j < state.node_count(); ++j) {
    if (j == state.id) continue;
    sum.axpy(fractions[j], held_copy(state, j).payload);
  }
  sum *= 1.0 / (1.0 - own);
  return sum;
}

ParameterVector aggregate(const NodeState& state, std::span<const double> fractions) {
  check_fractions(state, fractions);
  ParameterVector v(state.w.dim());
  for (NodeId j = 0; j < state.node_count(); ++j) {
    v.axpy(fractions[j], j == state.id ? state.w : held_copy(state, j).payload);
  }
  return v;
}

LocalStep compute_local_step(const NodeState& state, const LocalTask& task,
                             std::span<const double> fractions, double eta) {
  if (!(eta > 0.0)) throw ContractViolation("local step: eta must be positive");
  LocalStep step;
  step.aggregated = aggregate(state, fractions);
  step.gradient = local_gradient(task, step.aggregated);
  ParameterVector candidate = state.w;
  candidate.axpy(-eta, step.gradient);
  step.next = project(task.regularizer, candidate);
  step.direction = step.next - state.w;
  step.direction *= 1.0 / eta;
  if (!step.next.all_finite()) {
    throw ContractViolation("node " + std::to_string(state.id) + " produced a non-finite parameter");
  }
  return step;
}

NodeState local_update(const NodeState& state, const LocalTask& task,
                       std::span<const double> fractions, double eta) {
  NodeState next = state;
  next.w = compute_local_step(state, task, fractions, eta).next;
  next.t = state.t + 1;
  return next;
}

DeliveryStatus deliver_into(NodeState& state, const StampedParameter& msg) {
  if (msg.sender >= state.node_count()) throw ContractViolation("deliver: sender out of range");
  if (msg.sender == state.id) throw ContractViolation("deliver: node cannot message itself");
  if (msg.payload.dim() != state.w.dim()) throw ContractViolation("deliver: payload dimension mismatch");
  auto& slot = state.latest_received[msg.sender];
  if (slot && msg.stamp < slot->stamp) {
    log::warn("node " + std::to_string(state.id) + " dropped stale message from " +
              std::to_string(msg.sender) + " (stamp " + std::to_string(msg.stamp) + " < held " +
              std::to_string(slot->stamp) + ")");
    return DeliveryStatus::DroppedStale;
  }
  state.received[msg.sender] = true;
  if (slot && msg.stamp == slot->stamp) return DeliveryStatus::Duplicate;
  slot = msg;
  return DeliveryStatus::Accepted;
}

NodeState deliver(const NodeState& state, const StampedParameter& msg) {
  NodeState next = state;
  deliver_into(next, msg);
  return next;
}

bool check_staleness(const NodeState& state, std::int64_t gamma) {
  const auto t = static_cast<std::int64_t>(state.t);
  const std::int64_t floor = std::max<std::int64_t>(t - gamma, 0);
  for (NodeId j = 0; j < state.node_count(); ++j) {
    if (j == state.id) continue;
    const auto& entry = state.latest_received[j];
    if (!entry) return false;
    const auto tau = static_cast<std::int64_t>(entry->stamp);
    if (!(floor < tau && tau <= t)) return false;
  }
  return true;
}

std::optional<std::uint64_t> max_staleness(const NodeState& state) {
  std::uint64_t worst = 0;
  for (NodeId j = 0; j < state.node_count(); ++j) {
    if (j == state.id) continue;
    const auto& entry = state.latest_received[j];
    if (!entry) return std::nullopt;
    if (entry->stamp <= state.t) worst = std::max(worst, state.t - entry->stamp);
  }
  return worst;
}

}  // namespace asyncdfl
