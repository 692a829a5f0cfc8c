#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "asyncdfl/learning/loss.hpp"
#include "asyncdfl/protocol/node_state.hpp"

namespace asyncdfl {

// F-bar(w) = sum_i alpha_i F_i(w)
double global_loss(const std::vector<LocalTask>& tasks, const ParameterVector& w);

// Sample-weighted accuracy of the single point w over all nodes' data;
// nullopt for quadratic tasks.
std::optional<double> global_accuracy(const std::vector<LocalTask>& tasks, const ParameterVector& w);

// I/L3 - delta (I-1)/L2 - (I(3+eta)-1) L1/2 - (3I-1) eta^2 L1 Gamma^2 / 2
double u_of_eta(const SmoothnessConstants& c, std::size_t node_count, double eta, double gamma);

struct EtaWindow {
  double lower = 0.0;
  double upper = 0.0;
  bool empty() const noexcept { return !(lower < upper); }
  bool contains(double eta) const noexcept { return !empty() && lower < eta && eta < upper; }
  double midpoint() const noexcept { return 0.5 * (lower + upper); }
};

// (delta, min(2/(L1 L3) - (3I-1)/I, sqrt(delta)))
EtaWindow eta_window(const SmoothnessConstants& c, std::size_t node_count);

struct BoundRow {
  double loss = 0.0;         // F-bar(w(t+1))
  double grad_norm_sq = 0.0; // ||g(t)||^2
  double bound = 0.0;        // U after accumulating ||g(t)||^2
  bool violated = false;
};

struct BoundTrace {
  double u = 0.0;
  double initial_loss = 0.0;
  bool vacuous = false;  // u <= 0: no assertion made
  std::vector<BoundRow> rows;
  std::size_t violations = 0;
};

// U(t) = F-bar(w(0)) - eta u sum_{tau <= t} ||g(tau)||^2. A row is violated
// when loss > U + 1e-9 |U| and the bound is not vacuous.
BoundTrace bound_trace(double initial_loss, std::span<const double> losses,
                       std::span<const double> grad_norms_sq, double eta, double u);

struct ConsensusSnapshot {
  double to_aggregate = 0.0;  // max_i ||w(t) - v_i(t)||
  double held_copies = 0.0;   // max_{i,j} ||w_i(t) - w_i(tau_ji(t))||
};

// w(t) = sum alpha_i w_i(t) from the nodes' own parameters.
ConsensusSnapshot consensus_metrics(std::span<const NodeState> nodes, std::span<const double> fractions);

void write_bound_csv(std::ostream& out, const BoundTrace& trace);

}  // namespace asyncdfl
