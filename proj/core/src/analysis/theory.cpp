#include "asyncdfl/analysis/theory.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "asyncdfl/errors.hpp"

namespace asyncdfl {

double global_loss(const std::vector<LocalTask>& tasks, const ParameterVector& w) {
  double total = 0.0;
  for (const auto& t : tasks) total += t.fraction * local_loss(t, w);
  return total;
}

std::optional<double> global_accuracy(const std::vector<LocalTask>& tasks, const ParameterVector& w) {
  double correct = 0.0;
  std::size_t count = 0;
  for (const auto& t : tasks) {
    const auto acc = local_accuracy(t, w);
    if (!acc) return std::nullopt;
    correct += *acc * static_cast<double>(t.data.size());
    count += t.data.size();
  }
  return count == 0 ? std::nullopt : std::optional<double>(correct / static_cast<double>(count));
}

double u_of_eta(const SmoothnessConstants& c, std::size_t node_count, double eta, double gamma) {
  const double i = static_cast<double>(node_count);
  return i / c.L3 - c.delta * (i - 1.0) / c.L2 - (i * (3.0 + eta) - 1.0) * c.L1 / 2.0 -
         (3.0 * i - 1.0) * eta * eta * c.L1 * gamma * gamma / 2.0;
}

EtaWindow eta_window(const SmoothnessConstants& c, std::size_t node_count) {
  const double i = static_cast<double>(node_count);
  const double first = 2.0 / (c.L1 * c.L3) - (3.0 * i - 1.0) / i;
  return {c.delta, std::min(first, std::sqrt(c.delta))};
}

BoundTrace bound_trace(double initial_loss, std::span<const double> losses,
                       std::span<const double> grad_norms_sq, double eta, double u) {
  if (losses.size() != grad_norms_sq.size()) throw ContractViolation("bound_trace: length mismatch");
  BoundTrace out;
  out.u = u;
  out.initial_loss = initial_loss;
  out.vacuous = !(u > 0.0);
  out.rows.reserve(losses.size());
  double accumulated = 0.0;
  for (std::size_t t = 0; t < losses.size(); ++t) {
    accumulated += grad_norms_sq[t];
    BoundRow row;
    row.loss = losses[t];
    row.grad_norm_sq = grad_norms_sq[t];
    row.bound = initial_loss - eta * u * accumulated;
    row.violated = !out.vacuous && row.loss > row.bound + 1e-9 * std::abs(row.bound);
    if (row.violated) ++out.violations;
    out.rows.push_back(row);
  }
  return out;
}

ConsensusSnapshot consensus_metrics(std::span<const NodeState> nodes, std::span<const double> fractions) {
  ConsensusSnapshot snap;
  if (nodes.empty()) return snap;
  ParameterVector w(nodes.front().w.dim());
  for (std::size_t i = 0; i < nodes.size(); ++i) w.axpy(fractions[i], nodes[i].w);
  for (const auto& node : nodes) {
    snap.to_aggregate = std::max(snap.to_aggregate, distance(w, aggregate(node, fractions)));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (i == node.id) continue;
      const auto& held = node.latest_received[i];
      if (held) snap.held_copies = std::max(snap.held_copies, distance(nodes[i].w, held->payload));
    }
  }
  return snap;
}

void write_bound_csv(std::ostream& out, const BoundTrace& trace) {
  out << "iteration,loss,grad_norm_sq,bound_U,u_eta,violated\n";
  out << std::setprecision(17);
  for (std::size_t t = 0; t < trace.rows.size(); ++t) {
    const auto& r = trace.rows[t];
    out << t << ',' << r.loss << ',' << r.grad_norm_sq << ',' << r.bound << ',' << trace.u << ','
        << (r.violated ? 1 : 0) << '\n';
  }
}

}  // namespace asyncdfl
